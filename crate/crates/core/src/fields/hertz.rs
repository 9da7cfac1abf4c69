//! Potentials and fields derived from a bivector Hertz potential Π.
//!
//! Every stage is applied numerically to the previous stage's lattice values,
//! so Π is sampled with three ghost layers and each derivative strips one.

use rayon::prelude::*;

use crate::algebra::{Grade, Multivector};
use crate::error::Result;
use crate::inversion::{eb_split, EBSplit};
use crate::report::ResidualReport;

use super::diffop::DiffOp;
use super::field::{check_grade, padded, MultivectorField};
use super::lattice::{Grid, LatticeSpec};

/// Ghost layers needed around the reporting domain.
pub const HERTZ_RADIUS: usize = 3;

#[derive(Debug, Clone)]
pub struct HertzBundle {
    pub domain: LatticeSpec,
    pub pi: MultivectorField,
    /// A = −δΠ.
    pub a: MultivectorField,
    /// Stratton potential, γ^5 S = dΠ with γ^5 the volume element.
    pub stratton: MultivectorField,
    /// 𝒜 = A + γ^5 S = ∂Π.
    pub cal_a: MultivectorField,
    /// F = ∂𝒜.
    pub f: MultivectorField,
    /// F_e = dA.
    pub fe: MultivectorField,
    /// F_m = dS, so that F = F_e + γ₅F_m.
    pub fm: MultivectorField,
}

pub fn hertz_pipeline(pi: &MultivectorField, domain: &LatticeSpec) -> Result<HertzBundle> {
    let pig = padded(pi, domain, HERTZ_RADIUS)?;
    check_grade(&pig, Grade::BIVECTOR, 1e-10)?;
    let vol = Multivector::volume();

    let a = DiffOp::codifferential().scaled(-1.0).apply_grid(&pig)?;
    let d_pi = DiffOp::exterior().apply_grid(&pig)?;
    let s = d_pi.map(|v| -(vol * *v));
    let cal_a = a.zip_map(&s, |a, s| *a + vol * *s);
    let fe = DiffOp::exterior().apply_grid(&a)?;
    let fm = DiffOp::exterior().apply_grid(&s)?;
    let f = DiffOp::dirac().apply_grid(&cal_a)?;

    Ok(HertzBundle {
        domain: *domain,
        pi: MultivectorField::from_grid(pig),
        a: MultivectorField::from_grid(a),
        stratton: MultivectorField::from_grid(s),
        cal_a: MultivectorField::from_grid(cal_a),
        f: MultivectorField::from_grid(f),
        fe: MultivectorField::from_grid(fe),
        fm: MultivectorField::from_grid(fm),
    })
}

/// Residual columns on the bundle's domain:
/// - `lorenz_gauge`: ‖δA‖
/// - `stratton_gauge`: ‖δS‖
/// - `magnetic_current`: ‖δdS‖
/// - `hertz_theorem`: ‖∂F_e‖
///
/// Informational: `electric_current` ‖δdA‖, `box_pi` ‖□Π‖,
/// `electric_magnetic_balance` ‖F_e + γ₅F_m‖ and `field_split`
/// ‖F − F_e − γ₅F_m‖.
pub fn hertz_residuals(bundle: &HertzBundle) -> Result<ResidualReport> {
    let dom = bundle.domain;
    let delta = DiffOp::codifferential();
    let norms = |g: Grid| g.data.par_iter().map(Multivector::norm).collect::<Vec<_>>();
    let ring = |f: &MultivectorField| padded(f, &dom, 1);
    let g5 = Multivector::gamma5();

    let mut rep = ResidualReport::on(dom);
    rep.push("lorenz_gauge", norms(delta.apply_grid(&ring(&bundle.a)?)?));
    rep.push("stratton_gauge", norms(delta.apply_grid(&ring(&bundle.stratton)?)?));
    rep.push("magnetic_current", norms(delta.apply_grid(&ring(&bundle.fm)?)?));
    rep.push("hertz_theorem", norms(DiffOp::dirac().apply_grid(&ring(&bundle.fe)?)?));
    rep.push_info("electric_current", norms(delta.apply_grid(&ring(&bundle.fe)?)?));
    rep.push_info("box_pi", norms(DiffOp::dalembertian().apply_grid(&padded(&bundle.pi, &dom, 2)?)?));

    let fe = bundle.fe.sample(&dom)?;
    let fm = bundle.fm.sample(&dom)?;
    let f = bundle.f.sample(&dom)?;
    let balance = fe.zip_map(&fm, |e, m| (*e + g5 * *m).norm());
    rep.push_info("electric_magnetic_balance", balance.data);
    let split: Vec<f64> = (0..dom.len()).into_par_iter().map(|i| (f.data[i] - fe.data[i] - g5 * fm.data[i]).norm()).collect();
    rep.push_info("field_split", split);
    Ok(rep)
}

/// E and B of F on the bundle's domain.
pub fn hertz_eb(bundle: &HertzBundle) -> Result<Grid<EBSplit>> {
    let f = bundle.f.sample(&bundle.domain)?;
    let data = f.data.par_iter().map(|v| eb_split(&v.grade_project(Grade::BIVECTOR))).collect::<Result<Vec<_>>>()?;
    Grid::from_values(bundle.domain, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain(h: f64) -> LatticeSpec {
        LatticeSpec::new([0.2, 0.1, -0.3, 0.4], h, [6; 4]).unwrap()
    }

    fn bundle(src: &str, h: f64) -> HertzBundle {
        hertz_pipeline(&MultivectorField::parse(src).unwrap(), &domain(h)).unwrap()
    }

    fn max_norm(f: &MultivectorField, dom: &LatticeSpec) -> f64 {
        f.sample(dom).unwrap().data.iter().map(Multivector::norm).fold(0.0, f64::max)
    }

    #[test]
    fn constant_potential_is_silent() {
        let b = bundle("2*g12 - g03", 0.1);
        for f in [&b.a, &b.stratton, &b.f, &b.fe, &b.fm] {
            assert_eq!(max_norm(f, &b.domain), 0.0);
        }
        let rep = hertz_residuals(&b).unwrap();
        for r in &rep.residuals {
            assert_eq!(r.max(), 0.0, "{}", r.name);
        }
    }

    #[test]
    fn grades_and_gauge() {
        let b = bundle("sin(x0 - x3)*g21 + x1*x2*g03", 0.05);
        let dom = b.domain.expand(1);
        check_grade(&b.a.sample(&dom).unwrap(), Grade::VECTOR, 1e-12).unwrap();
        check_grade(&b.stratton.sample(&dom).unwrap(), Grade::VECTOR, 1e-12).unwrap();
        check_grade(&b.fe.sample(&dom).unwrap(), Grade::BIVECTOR, 1e-12).unwrap();
        let rep = hertz_residuals(&b).unwrap();
        assert!(rep.max("lorenz_gauge") < 1e-12);
        assert!(rep.max("stratton_gauge") < 1e-12);
        assert!(rep.max("field_split") < 1e-12);
    }

    #[test]
    fn transverse_null_wave_has_no_potential() {
        // Polarisation γ₂₁ is orthogonal to k = (1,0,0,1), so δΠ vanishes.
        let b = bundle("sin(x0 - x3)*g21", 0.05);
        assert_eq!(max_norm(&b.a, &b.domain), 0.0);
        assert_eq!(max_norm(&b.fe, &b.domain), 0.0);
        assert!(max_norm(&b.fm, &b.domain) < 1e-12);
        assert!(max_norm(&b.f, &b.domain) < 1e-12);
        assert!(max_norm(&b.stratton, &b.domain) > 0.1);
    }

    #[test]
    fn longitudinal_null_wave() {
        let b = bundle("sin(x0 - x3)*g01", 0.05);
        assert!(max_norm(&b.f, &b.domain) < 1e-12);
        assert!(max_norm(&b.fe, &b.domain) > 0.1);
        let rep = hertz_residuals(&b).unwrap();
        assert!(rep.max("electric_magnetic_balance") < 1e-12);
        assert!(rep.max("hertz_theorem") < 1e-10);
    }

    #[test]
    fn time_oscillation_sources_field() {
        // □Π = −Π for sin(x0)γ₁γ₀.
        let b = bundle("sin(x0)*g10", 0.01);
        let f = b.f.sample(&b.domain).unwrap();
        let pi = b.pi.sample(&b.domain).unwrap();
        for (fv, pv) in f.data.iter().zip(&pi.data) {
            assert!((*fv + *pv).norm() < 1e-4);
        }
        let eb = hertz_eb(&b).unwrap();
        assert!(eb.data.iter().all(|s| s.b == [0.0; 3]));
    }

    #[test]
    fn wrong_grade_rejected() {
        assert!(hertz_pipeline(&MultivectorField::parse("x0*g1").unwrap(), &domain(0.1)).is_err());
    }
}
