//! Maxwell-Dirac equivalence of the second kind: a Dirac-Hestenes field
//! split by grade into ψ = −𝔊 + Π + γ₅𝔓.

use rayon::prelude::*;

use crate::algebra::{Grade, Multivector};
use crate::error::Result;
use crate::fields::diffop::{dirac_parts, partials, DiffOp};
use crate::fields::{check_grade, padded, Grid, LatticeSpec, MultivectorField};
use crate::report::ResidualReport;

#[derive(Debug, Clone)]
pub struct Mde2Inputs {
    /// Scalar field 𝔊.
    pub g: MultivectorField,
    /// Bivector field Π.
    pub pi: MultivectorField,
    /// Scalar field 𝔓.
    pub p: MultivectorField,
    pub m: f64,
    /// Electric current in □A = J_e; zero when absent.
    pub je: Option<MultivectorField>,
}

pub fn mde2_point(g: &Multivector, pi: &Multivector, p: &Multivector) -> Multivector {
    -*g + *pi + Multivector::gamma5() * *p
}

/// ψ = −𝔊 + Π + γ₅𝔓 pointwise; NaN where an input has no value.
pub fn mde2_build(inp: &Mde2Inputs) -> MultivectorField {
    let (g, pi, p) = (inp.g.clone(), inp.pi.clone(), inp.p.clone());
    MultivectorField::from_fn(move |x| match (g.eval(x), pi.eval(x), p.eval(x)) {
        (Ok(g), Ok(pi), Ok(p)) => mde2_point(&g, &pi, &p),
        _ => Multivector::nan(),
    })
}

fn slash(p: &[Multivector; 4]) -> Multivector {
    dirac_parts(p).slash
}

/// Residual columns:
/// - `hertz_form`: ∂Π − (∂𝔊 + m𝔓γ₃ + m⟨Πγ₀₁₂⟩₁) − γ₅(∂𝔓 + m𝔊γ₃ − γ₅⟨mΠγ₀₁₂⟩₃)
/// - `dirac_hestenes_form`: ∂ψγ₂₁ − mψγ₀
/// - `grade_split`: ‖hertz_form + dirac_hestenes_form·γ₂₁‖ relative to ‖∂ψ‖ + m‖ψ‖, with the
///   per-grade parts as informational `grade_split_k` columns
/// - `wave_a`: □A − J_e, `wave_stratton`: □(γ₅S),
///   `wave_g`: □𝔊 + m∂·⟨Πγ₀₁₂⟩₁, `wave_p`: □𝔓 − m∂·(γ₅⟨Πγ₀₁₂⟩₃)
pub fn mde2_residual(inp: &Mde2Inputs, domain: &LatticeSpec) -> Result<ResidualReport> {
    let m = inp.m;
    let r = 3;
    let g = padded(&inp.g, domain, r)?;
    let pi = padded(&inp.pi, domain, r)?;
    let p = padded(&inp.p, domain, r)?;
    check_grade(&g, Grade::SCALAR, 1e-12)?;
    check_grade(&pi, Grade::BIVECTOR, 1e-12)?;
    check_grade(&p, Grade::SCALAR, 1e-12)?;
    let je = match &inp.je {
        Some(f) => {
            let j = padded(f, domain, 0)?;
            check_grade(&j, Grade::VECTOR, 1e-12)?;
            j
        }
        None => Grid::from_fn(*domain, |_| Multivector::ZERO),
    };

    let g5 = Multivector::gamma5();
    let g3 = Multivector::gamma(3);
    let g012 = Multivector::lowered(&[0, 1, 2]).expect("distinct indices");
    let g21 = Multivector::gamma21();
    let g0 = Multivector::gamma(0);

    let psi = Grid {
        spec: g.spec,
        data: (0..g.data.len()).into_par_iter().map(|i| mde2_point(&g.data[i], &pi.data[i], &p.data[i])).collect(),
    };

    // Stage on domain + 2: A and γ₅S.
    let ring2 = domain.expand(2);
    let dg2 = partials(&g.crop(&ring2.expand(1))?)?;
    let dp2 = partials(&p.crop(&ring2.expand(1))?)?;
    let pi2 = pi.crop(&ring2)?;
    let g_2 = g.crop(&ring2)?;
    let p_2 = p.crop(&ring2)?;
    let (a, g5s): (Vec<Multivector>, Vec<Multivector>) = (0..ring2.len())
        .into_par_iter()
        .map(|i| {
            let t = pi2.data[i] * g012;
            let a = slash(&dg2.data[i]) + p_2.data[i] * g3 * m + t.grade_project(Grade::VECTOR) * m;
            let s = slash(&dp2.data[i]) + g_2.data[i] * g3 * m - g5 * t.grade_project(Grade::TRIVECTOR) * m;
            (a, g5 * s)
        })
        .unzip();
    let a = Grid { spec: ring2, data: a };
    let g5s = Grid { spec: ring2, data: g5s };

    let bx = DiffOp::dalembertian();
    let box_a = bx.apply_grid(&a)?;
    let box_s = bx.apply_grid(&g5s)?;
    let box_g = bx.apply_grid(&g.crop(&ring2)?)?;
    let box_p = bx.apply_grid(&p.crop(&ring2)?)?;
    let ring1 = domain.expand(1);
    let pi1 = pi.crop(&ring1)?;
    let vec_part = pi1.map(|v| (*v * g012).grade_project(Grade::VECTOR));
    let tri_part = pi1.map(|v| g5 * (*v * g012).grade_project(Grade::TRIVECTOR));
    let div = |x: &Grid| DiffOp::dirac().apply_grid(x).map(|d| d.map(Multivector::scalar_part));
    let div_vec = div(&vec_part)?;
    let div_tri = div(&tri_part)?;

    let dg = partials(&g.crop(&ring1)?)?;
    let dpi = partials(&pi1)?;
    let dp = partials(&p.crop(&ring1)?)?;
    let dpsi = partials(&psi.crop(&ring1)?)?;
    let (gi, pii, pin, psii) = (g.crop(domain)?, pi.crop(domain)?, p.crop(domain)?, psi.crop(domain)?);

    let rows: Vec<[f64; 12]> = (0..domain.len())
        .into_par_iter()
        .map(|i| {
            let t = pii.data[i] * g012;
            let (gv, pv) = (gi.data[i], pin.data[i]);
            let r71 = slash(&dpi.data[i])
                - (slash(&dg.data[i]) + pv * g3 * m + t.grade_project(Grade::VECTOR) * m)
                - g5 * (slash(&dp.data[i]) + gv * g3 * m - g5 * t.grade_project(Grade::TRIVECTOR) * m);
            let slash_psi = slash(&dpsi.data[i]);
            let r79 = slash_psi * g21 - psii.data[i] * g0 * m;
            let gap = r71 + r79 * g21;
            let scale = slash_psi.norm() + m.abs() * psii.data[i].norm();
            let rel = |x: f64| if scale > 0.0 { x / scale } else { x };
            let mut row = [0.0; 12];
            row[0] = r71.norm();
            row[1] = r79.norm();
            row[2] = rel(gap.norm());
            for (k, slot) in row[3..8].iter_mut().enumerate() {
                *slot = rel(gap.grade_project(Grade::new(k as u8).expect("grade in range")).norm());
            }
            row[8] = (box_a.data[i] - je.data[i]).norm();
            row[9] = box_s.data[i].norm();
            row[10] = (box_g.data[i] + Multivector::scalar(m * div_vec.data[i])).norm();
            row[11] = (box_p.data[i] - Multivector::scalar(m * div_tri.data[i])).norm();
            row
        })
        .collect();

    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let mut rep = ResidualReport::on(*domain);
    rep.push("hertz_form", col(0));
    rep.push("dirac_hestenes_form", col(1));
    rep.push("grade_split", col(2));
    for k in 0..5 {
        rep.push_info(&format!("grade_split_{k}"), col(3 + k));
    }
    rep.push("wave_a", col(8));
    rep.push("wave_stratton", col(9));
    rep.push("wave_g", col(10));
    rep.push("wave_p", col(11));
    Ok(rep)
}
