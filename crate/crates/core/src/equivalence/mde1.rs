//! Maxwell-Dirac equivalence of the first kind: diagnostics of a
//! Dirac-Hestenes field written as √ρ e^{γ₅β/2} R, the spinorial form of
//! Maxwell's equation, and the Dirac-Hestenes residual.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{EvenMultivector, Grade, Multivector};
use crate::error::{Error, Result};
use crate::fields::diffop::{partials, DiffOp};
use crate::fields::maxwell::vector_components;
use crate::fields::{padded, Grid, LatticeSpec, MultivectorField};
use crate::report::ResidualReport;

use super::canonical::{canonical_decompose, CanonicalForm};

/// Per-point quantities of the first equivalence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mde1Diagnostics {
    pub rho: f64,
    pub beta: f64,
    /// Ω_μ = 2(∂_μR)R̃, projected to grade 2.
    pub omega: [Multivector; 4],
    /// Size of the non-bivector part of 2(∂_μR)R̃ relative to Ω_μ.
    pub omega_leak: f64,
    /// Ω = v^μΩ_μ.
    pub omega_v: Multivector,
    /// j = γ^μ⟨∂_μψγ₂₁ψ̃⟩₀.
    pub j: Multivector,
    /// g = γ^μ⟨∂_μψγ₅γ₂₁ψ̃⟩₀.
    pub g: Multivector,
    /// λρv.
    pub j_closed: Multivector,
    /// κρv.
    pub g_closed: Multivector,
    /// J = ψγ₀ψ̃.
    pub current: Multivector,
    pub v: Multivector,
    /// S = ½Rγ₂₁R̃.
    pub spin: Multivector,
    /// Λ = ⟨ΩS⟩₀.
    pub lambda_cap: f64,
    /// K = ⟨Ωγ₅S⟩₀.
    pub k_cap: f64,
    pub lambda: f64,
    pub kappa: f64,
    /// ‖γ^μ(⟨Ω_μS⟩₀ − Λv_μ)‖ + ‖γ^μ(⟨Ω_μγ₅S⟩₀ − Kv_μ)‖.
    pub projection_gap: f64,
    pub beta0: f64,
}

impl Mde1Diagnostics {
    /// Vanishes when the closed forms j = λρv, g = κρv hold.
    pub fn closed_form_gap(&self) -> f64 {
        (self.j - self.j_closed).norm() + (self.g - self.g_closed).norm()
    }
}

/// Rotates ψ by e^{γ₅β₀/2}, which turns ψγ₂₁ψ̃ into e^{γ₅β₀}ψγ₂₁ψ̃.
pub fn duality_rotate(psi: &Multivector, beta0: f64) -> Multivector {
    if beta0 == 0.0 {
        *psi
    } else {
        psi.complex_scale(Complex64::from_polar(1.0, beta0 / 2.0))
    }
}

/// ψ on `domain` plus `r` ghost layers, checked even.
pub(crate) fn even_grid(psi: &MultivectorField, domain: &LatticeSpec, r: usize) -> Result<Grid> {
    let g = padded(psi, domain, r)?;
    for v in g.data.iter().filter(|v| v.is_finite()) {
        EvenMultivector::try_from_multivector(v)?;
    }
    Ok(g)
}

fn canonical_of(m: &Multivector) -> Option<CanonicalForm> {
    canonical_decompose(&EvenMultivector::project(m)).ok()
}

/// Central differences of the rotor field. Neighbouring rotors are sign
/// aligned with the centre first: R is only fixed up to sign where β
/// crosses the branch cut.
fn rotor_partials(canon: &Grid<Option<CanonicalForm>>) -> Result<Grid<Option<[Multivector; 4]>>> {
    let out = canon.spec.shrink(1)?;
    let strides = canon.spec.strides();
    let inv = 1.0 / (2.0 * canon.spec.spacing);
    let data = (0..out.len())
        .into_par_iter()
        .map(|i| {
            let idx = out.multi_index(i);
            let base = canon.spec.flat_index(idx.map(|v| v + 1));
            let centre = canon.data[base]?.rotor.to_multivector();
            let rev = centre.reverse();
            let align = |k: usize| -> Option<Multivector> {
                let r = canon.data[k]?.rotor.to_multivector();
                Some(if (r * rev).scalar_part() < 0.0 { -r } else { r })
            };
            let mut p = [Multivector::ZERO; 4];
            for (mu, slot) in p.iter_mut().enumerate() {
                *slot = (align(base + strides[mu])? - align(base - strides[mu])?) * inv;
            }
            Some(p)
        })
        .collect();
    Ok(Grid { spec: out, data })
}

fn diagnose(
    psi: &Multivector,
    dpsi: &[Multivector; 4],
    c: &CanonicalForm,
    dr: &[Multivector; 4],
    beta0: f64,
) -> Mde1Diagnostics {
    let g21 = Multivector::gamma21();
    let g5 = Multivector::gamma5();
    let rotor = c.rotor.to_multivector();
    let rrev = rotor.reverse();
    let psi_rev = psi.reverse();

    let mut omega = [Multivector::ZERO; 4];
    let mut omega_leak = 0.0f64;
    for mu in 0..4 {
        let full = dr[mu] * rrev * 2.0;
        omega[mu] = full.grade_project(Grade::BIVECTOR);
        let leak = full.off_grade_norm(Grade::BIVECTOR);
        if leak > 0.0 {
            omega_leak = omega_leak.max(leak / full.norm());
        }
    }

    let current = *psi * Multivector::gamma(0) * psi_rev;
    let v = current / c.rho;
    let vc = vector_components(&v);
    let spin = rotor * g21 * rrev * 0.5;
    let omega_v: Multivector = (0..4).map(|mu| omega[mu] * vc[mu]).sum();
    let lambda_cap = (omega_v * spin).scalar_part();
    let k_cap = (omega_v * g5 * spin).scalar_part();
    let (cb, sb) = (c.beta.cos(), c.beta.sin());
    let lambda = lambda_cap * cb + k_cap * sb;
    let kappa = k_cap * cb - lambda_cap * sb;

    let mut j = Multivector::ZERO;
    let mut g = Multivector::ZERO;
    let mut lam_gap = Multivector::ZERO;
    let mut k_gap = Multivector::ZERO;
    let v_lower: [f64; 4] = std::array::from_fn(|mu| v.get(1 << mu));
    for mu in 0..4 {
        let up = Multivector::gamma_up(mu);
        j += up * (dpsi[mu] * g21 * psi_rev).scalar_part();
        g += up * (dpsi[mu] * g5 * g21 * psi_rev).scalar_part();
        lam_gap += up * ((omega[mu] * spin).scalar_part() - lambda_cap * v_lower[mu]);
        k_gap += up * ((omega[mu] * g5 * spin).scalar_part() - k_cap * v_lower[mu]);
    }

    Mde1Diagnostics {
        rho: c.rho,
        beta: c.beta,
        omega,
        omega_leak,
        omega_v,
        j,
        g,
        j_closed: current * lambda,
        g_closed: current * kappa,
        current,
        v,
        spin,
        lambda_cap,
        k_cap,
        lambda,
        kappa,
        projection_gap: lam_gap.norm() + k_gap.norm(),
        beta0,
    }
}

/// Diagnostics on the interior of an even grid, `None` where the canonical
/// decomposition does not exist at a point or one of its neighbours.
fn diagnostics_grid(psi: &Grid, beta0: f64) -> Result<Grid<Option<Mde1Diagnostics>>> {
    let psi = psi.map(|m| duality_rotate(m, beta0));
    let dpsi = partials(&psi)?;
    let canon = psi.map(canonical_of);
    let dr = rotor_partials(&canon)?;
    let off = psi.spec.offset_of(&dpsi.spec).expect("interior is aligned");
    let data = (0..dpsi.spec.len())
        .into_par_iter()
        .map(|i| {
            let idx = dpsi.spec.multi_index(i);
            let k = psi.spec.flat_index(std::array::from_fn(|a| idx[a] + off[a]));
            let c = canon.data[k]?;
            Some(diagnose(&psi.data[k], &dpsi.data[i], &c, &dr.data[i]?, beta0))
        })
        .collect();
    Ok(Grid { spec: dpsi.spec, data })
}

/// Per-point diagnostics, `None` where ψ is singular within the stencil.
pub fn mde1_diagnostics_masked(
    psi: &MultivectorField,
    domain: &LatticeSpec,
    beta0: f64,
) -> Result<Grid<Option<Mde1Diagnostics>>> {
    diagnostics_grid(&even_grid(psi, domain, 1)?, beta0)
}

/// Per-point diagnostics; fails if ψ is singular anywhere the stencil
/// reaches.
pub fn mde1_diagnostics(psi: &MultivectorField, domain: &LatticeSpec, beta0: f64) -> Result<Grid<Mde1Diagnostics>> {
    let grid = even_grid(psi, domain, 1)?;
    let diag = diagnostics_grid(&grid, beta0)?;
    let data = diag
        .data
        .iter()
        .zip(0..)
        .map(|(d, i)| {
            d.ok_or_else(|| {
                let x = domain.point(i);
                let m = psi.eval(&x).unwrap_or(Multivector::ZERO);
                Error::SingularSpinor { norm_sq: (m * m.reverse()).to_complex().norm_sqr() }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Grid::from_values(*domain, data)
}

/// Closed-form and projection discrepancies plus λ statistics. Masked
/// points become NaN.
pub fn mde1_report(diag: &Grid<Option<Mde1Diagnostics>>) -> ResidualReport {
    let col = |f: fn(&Mde1Diagnostics) -> f64| diag.data.iter().map(|d| d.as_ref().map_or(f64::NAN, f)).collect();
    let mut rep = ResidualReport::on(diag.spec);
    rep.push_info("closed_form_j", col(|d| (d.j - d.j_closed).norm()));
    rep.push_info("closed_form_g", col(|d| (d.g - d.g_closed).norm()));
    rep.push_info("projection_gap", col(|d| d.projection_gap));
    rep.push_info("omega_grade_leak", col(|d| d.omega_leak));
    push_lambda_stats(&mut rep, diag.data.iter().flatten().map(|d| (d.lambda, d.kappa)));
    rep
}

fn push_lambda_stats(rep: &mut ResidualReport, it: impl Iterator<Item = (f64, f64)>) {
    let (mut n, mut sum, mut lo, mut hi, mut kmax) = (0usize, 0.0, f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for (l, k) in it {
        n += 1;
        sum += l;
        lo = lo.min(l);
        hi = hi.max(l);
        kmax = kmax.max(k.abs());
    }
    if n == 0 {
        return;
    }
    let mean = sum / n as f64;
    rep.push_scalar("lambda_mean", mean);
    rep.push_scalar("lambda_spread", if mean != 0.0 { (hi - lo) / mean.abs() } else { hi - lo });
    rep.push_scalar("kappa_max", kmax);
}

/// Residuals of the spinorial Maxwell chain, each relative to the pointwise
/// scale ‖ψ‖·Σ_μ‖∂_μψ‖ + ‖𝒥‖:
/// - `bilinear_identity`: γ^μ⟨P_μ⟩₂ − [∂ψγ₂₁ψ̃ − γ^μ⟨P_μ⟩₀ − γ^μ⟨P_μ⟩₄] with
///   P_μ = ∂_μψγ₂₁ψ̃
/// - `spinorial_maxwell`: ∂ψγ₂₁ψ̃ − (½𝒥 + j + γ₅g)
/// - `spinorial_dirac_form`: ∂ψγ₂₁ − (e^{γ₅β}𝒥ψ/2ρ + λψγ₀ + γ₅κψγ₀),
///   masked where ψ is singular
///
/// Without an explicit 𝒥 the product rule on the shared partials is used;
/// `current_product_rule` compares it with ∂(ψγ₂₁ψ̃) differenced directly.
pub fn spinorial_maxwell_residual(
    psi: &MultivectorField,
    jcal: Option<&MultivectorField>,
    domain: &LatticeSpec,
) -> Result<ResidualReport> {
    let grid = even_grid(psi, domain, 1)?;
    let inner = grid.crop(domain)?;
    let dpsi = partials(&grid)?;
    let diag = diagnostics_grid(&grid, 0.0)?;
    let g21 = Multivector::gamma21();
    let g5 = Multivector::gamma5();
    let f = grid.map(|m| *m * g21 * m.reverse());
    let df = DiffOp::dirac().apply_grid(&f)?;
    let given = jcal.map(|j| padded(j, domain, 0)).transpose()?;

    let rows: Vec<[f64; 4]> = (0..domain.len())
        .into_par_iter()
        .map(|i| {
            let psi = inner.data[i];
            let prev = psi.reverse();
            let p: [Multivector; 4] = std::array::from_fn(|mu| dpsi.data[i][mu] * g21 * prev);
            let slash_f: Multivector = (0..4).map(|mu| Multivector::gamma_up(mu) * p[mu]).sum();
            let mut lhs = Multivector::ZERO;
            let mut rhs = slash_f;
            let mut product = Multivector::ZERO;
            for (mu, pm) in p.iter().enumerate() {
                let up = Multivector::gamma_up(mu);
                lhs += up * pm.grade_project(Grade::BIVECTOR);
                rhs -= up * pm.grade_project(Grade::SCALAR) + up * pm.grade_project(Grade::PSEUDOSCALAR);
                product += up * pm.grade_project(Grade::BIVECTOR) * 2.0;
            }
            let jc = given.as_ref().map_or(product, |g| g.data[i]);
            let scale = psi.norm() * dpsi.data[i].iter().map(Multivector::norm).sum::<f64>() + jc.norm();
            let rel = |x: Multivector| if scale > 0.0 { x.norm() / scale } else { x.norm() };

            let (j, g) = (0..4).fold((Multivector::ZERO, Multivector::ZERO), |(j, g), mu| {
                let up = Multivector::gamma_up(mu);
                (
                    j + up * (dpsi.data[i][mu] * g21 * prev).scalar_part(),
                    g + up * (dpsi.data[i][mu] * g5 * g21 * prev).scalar_part(),
                )
            });
            let r620 = slash_f - (jc * 0.5 + j + g5 * g);
            let r636 = match diag.data[i] {
                Some(d) => {
                    let slash_psi: Multivector =
                        (0..4).map(|mu| Multivector::gamma_up(mu) * dpsi.data[i][mu]).sum();
                    let phase = Multivector::from_complex(Complex64::from_polar(1.0, d.beta));
                    let g0 = Multivector::gamma(0);
                    let rhs = phase * jc * psi / (2.0 * d.rho) + psi * g0 * d.lambda + g5 * psi * g0 * d.kappa;
                    rel(slash_psi * g21 - rhs)
                }
                None => f64::NAN,
            };
            [rel(lhs - rhs), rel(r620), r636, (product - df.data[i]).norm()]
        })
        .collect();

    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let mut rep = ResidualReport::on(*domain);
    rep.push("bilinear_identity", col(0));
    rep.push("spinorial_maxwell", col(1));
    rep.push("spinorial_dirac_form", col(2));
    rep.push_info("current_product_rule", col(3));
    Ok(rep)
}

/// ‖∂ψγ₂₁ − λψγ₀‖ with the constraint columns |∂·j|, |∂·g|, |∂·J| and the
/// λ, κ statistics of the diagnostics.
pub fn dh_residual(psi: &MultivectorField, lambda: f64, domain: &LatticeSpec) -> Result<ResidualReport> {
    let grid = even_grid(psi, domain, 2)?;
    let diag = diagnostics_grid(&grid, 0.0)?;
    let ring = domain.expand(1);
    let dpsi = partials(&grid.crop(&ring)?)?;
    let inner = grid.crop(domain)?;
    let g21 = Multivector::gamma21();
    let g0 = Multivector::gamma(0);

    let dh: Vec<f64> = (0..domain.len())
        .into_par_iter()
        .map(|i| {
            let slash: Multivector = (0..4).map(|mu| Multivector::gamma_up(mu) * dpsi.data[i][mu]).sum();
            (slash * g21 - inner.data[i] * g0 * lambda).norm()
        })
        .collect();

    let nan = Multivector::nan();
    let pick = |f: fn(&Mde1Diagnostics) -> Multivector| {
        let g = Grid { spec: diag.spec, data: diag.data.iter().map(|d| d.as_ref().map_or(nan, f)).collect() };
        DiffOp::dirac().apply_grid(&g).map(|div| div.data.iter().map(|v| v.scalar_part().abs()).collect::<Vec<_>>())
    };

    let mut rep = ResidualReport::on(*domain);
    rep.push("dirac_hestenes", dh);
    rep.push("div_j", pick(|d| d.j)?);
    rep.push("div_g", pick(|d| d.g)?);
    rep.push("div_current", pick(|d| d.current)?);
    let inner_diag = diag.crop(domain)?;
    push_lambda_stats(&mut rep, inner_diag.data.iter().flatten().map(|d| (d.lambda, d.kappa)));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inversion::bilinear_covariants;

    fn field(src: &str) -> MultivectorField {
        MultivectorField::parse(src).unwrap()
    }

    fn domain(h: f64) -> LatticeSpec {
        LatticeSpec::new([0.3, -0.1, 0.2, 0.5], h, [5; 4]).unwrap()
    }

    #[test]
    fn constant_spinor() {
        let psi = field("1.5 + 0.3*g12 - 0.2*g03 + 0.1*g5");
        let diag = mde1_diagnostics(&psi, &domain(0.1), 0.0).unwrap();
        for d in &diag.data {
            assert!(d.omega.iter().all(|o| *o == Multivector::ZERO));
            assert_eq!((d.j, d.g, d.lambda, d.kappa), (Multivector::ZERO, Multivector::ZERO, 0.0, 0.0));
        }
        let rep = spinorial_maxwell_residual(&psi, Some(&MultivectorField::zero()), &domain(0.1)).unwrap();
        for r in &rep.residuals {
            assert_eq!(r.max(), 0.0, "{}", r.name);
        }
        let rep = dh_residual(&psi, 0.0, &domain(0.1)).unwrap();
        for r in &rep.residuals {
            assert_eq!(r.max(), 0.0, "{}", r.name);
        }
    }

    #[test]
    fn time_rotor_frequency() {
        let c = 0.7;
        let psi = field(&format!("cos({c}*x0) + sin({c}*x0)*g21"));
        let h = 1.0 / 64.0;
        let diag = mde1_diagnostics(&psi, &domain(h), 0.0).unwrap();
        for d in &diag.data {
            assert!((d.lambda.abs() - c).abs() < 1e-4);
            assert!(d.kappa.abs() < 1e-12);
            assert!((d.v - Multivector::gamma(0)).norm() < 1e-12);
            assert!(d.closed_form_gap() < 1e-4);
            let j_dir = d.j / d.j.norm();
            assert!((j_dir.get(1) - d.lambda.signum()).abs() < 1e-12);
        }
    }

    #[test]
    fn spatial_rotor_breaks_closed_form() {
        let psi = field("cos(x1) + sin(x1)*g21");
        let diag = mde1_diagnostics(&psi, &domain(0.05), 0.0).unwrap();
        for d in &diag.data {
            assert!(d.closed_form_gap() > 0.5);
            assert!(d.projection_gap > 0.5);
        }
    }

    #[test]
    fn current_matches_bilinears() {
        let psi = field("1 + 0.3*sin(x0)*g12 + 0.2*x1*g03 + 0.4*cos(x2)*g5 + 0.1*x3*g01");
        let spec = domain(0.1);
        let diag = mde1_diagnostics(&psi, &spec, 0.0).unwrap();
        for (i, d) in diag.data.iter().enumerate() {
            let m = psi.eval(&spec.point(i)).unwrap();
            let b = bilinear_covariants(&EvenMultivector::project(&m));
            assert!((b.j - d.current).norm() < 1e-13);
        }
    }

    #[test]
    fn identity_chain_for_generic_field() {
        let psi = field("1 + 0.3*sin(x0 + x3)*g12 + 0.2*x1*x2*g03 + 0.4*cos(x2)*g5 + 0.1*exp(x3)*g01");
        let rep = spinorial_maxwell_residual(&psi, None, &domain(0.05)).unwrap();
        assert!(rep.max("bilinear_identity") < 1e-13);
        assert!(rep.max("spinorial_maxwell") < 1e-13);
        assert!(rep.max("current_product_rule") < 1e-2);
    }

    #[test]
    fn rest_solution() {
        let psi = field("cos(x0) - sin(x0)*g21");
        let h = 1.0 / 64.0;
        let rep = dh_residual(&psi, 1.0, &domain(h)).unwrap();
        assert!(rep.max("dirac_hestenes") < 5e-4);
        assert!((rep.scalar("lambda_mean").unwrap() - 1.0).abs() < 1e-3);
        assert!(rep.scalar("lambda_spread").unwrap() < 1e-6);
        assert!(rep.scalar("kappa_max").unwrap() < 1e-6);
        let rep = spinorial_maxwell_residual(&psi, None, &domain(h)).unwrap();
        assert!(rep.max("spinorial_dirac_form") < 1e-12);
    }

    #[test]
    fn duality_rotation_shifts_beta() {
        let psi = field("2 + 0*x0");
        let diag = mde1_diagnostics(&psi, &domain(0.1), 0.6).unwrap();
        assert!((diag.data[0].beta - 0.6).abs() < 1e-12);
    }

    #[test]
    fn singular_spinor_rejected() {
        let psi = field("1 + g01");
        assert!(matches!(mde1_diagnostics(&psi, &domain(0.1), 0.0), Err(Error::SingularSpinor { .. })));
    }
}
