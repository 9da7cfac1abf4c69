//! Residuals of ∂F = J_e + γ₅J_m in Dirac, split and dual form, plus the
//! tensor-component divergence as an independent code path.

use rayon::prelude::*;

use crate::algebra::blade::METRIC;
use crate::algebra::{Grade, Multivector};
use crate::error::Result;
use crate::report::ResidualReport;

use super::diffop::{dirac_parts, partials};
use super::field::{check_grade, padded, MultivectorField};
use super::lattice::{Grid, LatticeSpec};

const GRADE_TOL: f64 = 1e-10;

/// Residual columns on `domain`:
/// - `dirac_form`: ‖∂F − J_e − γ₅J_m‖
/// - `exterior_form`: ‖dF − ⋆J_m‖
/// - `codifferential_form`: ‖δF + J_e‖
/// - `dual_form`: ‖∂(−γ₅F) + J_m − γ₅J_e‖
/// - `dual_consistency`: ‖dual − γ₅·dirac‖, zero up to rounding
///
/// `exterior_form_plus` (‖dF + ⋆J_m‖) is kept as an informational column.
pub fn generalized_maxwell_residual(
    f: &MultivectorField,
    je: &MultivectorField,
    jm: &MultivectorField,
    domain: &LatticeSpec,
) -> Result<ResidualReport> {
    let fg = padded(f, domain, 1)?;
    check_grade(&fg, Grade::BIVECTOR, GRADE_TOL)?;
    let jeg = padded(je, domain, 0)?;
    let jmg = padded(jm, domain, 0)?;
    check_grade(&jeg, Grade::VECTOR, GRADE_TOL)?;
    check_grade(&jmg, Grade::VECTOR, GRADE_TOL)?;
    let p = partials(&fg)?;
    let g5 = Multivector::gamma5();

    let rows: Vec<[f64; 6]> = (0..domain.len())
        .into_par_iter()
        .map(|i| {
            let parts = dirac_parts(&p.data[i]);
            let (je, jm) = (jeg.data[i], jmg.data[i]);
            let res = parts.slash - je - g5 * jm;
            let star_jm = jm.hodge_star();
            let dual_slash: Multivector =
                (0..4).map(|mu| Multivector::gamma_up(mu) * (-(g5 * p.data[i][mu]))).sum();
            let dual = dual_slash + jm - g5 * je;
            [
                res.norm(),
                (parts.d - star_jm).norm(),
                (parts.delta + je).norm(),
                dual.norm(),
                (dual - g5 * res).norm(),
                (parts.d + star_jm).norm(),
            ]
        })
        .collect();

    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let mut rep = ResidualReport::on(*domain);
    rep.push("dirac_form", col(0));
    rep.push("exterior_form", col(1));
    rep.push("codifferential_form", col(2));
    rep.push("dual_form", col(3));
    rep.push("dual_consistency", col(4));
    rep.push_info("exterior_form_plus", col(5));
    Ok(rep)
}

/// ∂_μF^{μν} and ∂_μ⋆F^{μν} at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentDivergence {
    pub div_f: [f64; 4],
    pub div_dual_f: [f64; 4],
}

/// F^{μν} = ⟨γ^νγ^μF⟩₀ for F = ½F^{μν}γ_μγ_ν.
pub fn tensor_components(f: &Multivector) -> [[f64; 4]; 4] {
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| (Multivector::gamma_up(nu) * Multivector::gamma_up(mu) * *f).scalar_part())
    })
}

/// ε^{μναβ} with ε^{0123} = −1.
fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut sign = -1.0;
    for a in 0..4 {
        for b in a + 1..4 {
            if idx[a] == idx[b] {
                return 0.0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// ⋆F^{μν} = ½ε^{μναβ}F_{αβ}; with ε^{0123} = −1 these are the
/// components of γ₅F.
pub fn dual_components(c: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += 0.5 * levi_civita([mu, nu, a, b]) * METRIC[a] * METRIC[b] * c[a][b];
                }
            }
            acc
        })
    })
}

/// Component divergences from the tensor matrix of each partial ∂_μF.
pub fn component_maxwell(f: &MultivectorField, domain: &LatticeSpec) -> Result<Grid<ComponentDivergence>> {
    let fg = padded(f, domain, 1)?;
    check_grade(&fg, Grade::BIVECTOR, GRADE_TOL)?;
    Ok(partials(&fg)?.map(|p| {
        let mut div_f = [0.0; 4];
        let mut div_dual_f = [0.0; 4];
        for (mu, pm) in p.iter().enumerate() {
            let c = tensor_components(pm);
            let d = dual_components(&c);
            for nu in 0..4 {
                div_f[nu] += c[mu][nu];
                div_dual_f[nu] += d[mu][nu];
            }
        }
        ComponentDivergence { div_f, div_dual_f }
    }))
}

/// Contravariant components v^ν of the vector part of `m`.
pub fn vector_components(m: &Multivector) -> [f64; 4] {
    std::array::from_fn(|nu| METRIC[nu] * m.get(1 << nu))
}

/// The same divergences read geometrically from ⟨∂F⟩₁ and ⟨∂(γ₅F)⟩₁.
pub fn geometric_divergence(f: &MultivectorField, domain: &LatticeSpec) -> Result<Grid<ComponentDivergence>> {
    let fg = padded(f, domain, 1)?;
    let g5 = Multivector::gamma5();
    Ok(partials(&fg)?.map(|p| {
        let slash = dirac_parts(p).slash;
        let dual: Multivector = (0..4).map(|mu| Multivector::gamma_up(mu) * (g5 * p[mu])).sum();
        ComponentDivergence { div_f: vector_components(&slash), div_dual_f: vector_components(&dual) }
    }))
}
