//! The Minkowski Seiberg-Witten system closed by A = λψγ₀ψ⁻¹, and the gauge
//! behaviour of the coupled Weyl equations.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{invert_even, EvenMultivector, Grade, Multivector};
use crate::complexified::{parity_eigenstates, weyl_split};
use crate::error::Result;
use crate::fields::diffop::{dirac_parts, partials, DiffOp};
use crate::fields::{check_grade, padded, Grid, LatticeSpec, MultivectorField};
use crate::report::ResidualReport;

use super::mde1::even_grid;

#[derive(Debug, Clone)]
pub struct SwState {
    pub psi: MultivectorField,
    /// Used when the ansatz is off; zero when absent.
    pub a: Option<MultivectorField>,
    /// Defaults to ½ψγ₂₁ψ̃.
    pub f: Option<MultivectorField>,
    pub lambda: f64,
}

/// λψγ₀ψ⁻¹, NaN where ψ is not invertible.
pub fn ansatz_potential(psi: &Multivector, lambda: f64) -> Multivector {
    match invert_even(&EvenMultivector::project(psi)) {
        Ok(inv) => *psi * Multivector::gamma(0) * inv.to_multivector() * lambda,
        Err(_) => Multivector::nan(),
    }
}

/// Residual columns, masked where the ansatz is undefined:
/// - `r1`: ∂ψγ₂₁ − Aψ
/// - `r2`: F − ½ψγ₂₁ψ̃
/// - `r3`: F − dA
/// - `r4`: A − λψγ₀ψ⁻¹
pub fn sw_residuals(state: &SwState, domain: &LatticeSpec, use_ansatz: bool) -> Result<ResidualReport> {
    let psi = even_grid(&state.psi, domain, 1)?;
    let ans = psi.map(|m| ansatz_potential(m, state.lambda));
    let a = if use_ansatz {
        ans.clone()
    } else {
        match &state.a {
            Some(f) => {
                let g = padded(f, domain, 1)?;
                check_grade(&g, Grade::VECTOR, 1e-10)?;
                g
            }
            None => Grid::from_fn(psi.spec, |_| Multivector::ZERO),
        }
    };
    let g21 = Multivector::gamma21();
    let inner = psi.crop(domain)?;
    let half_f = inner.map(|m| *m * g21 * m.reverse() * 0.5);
    let f = match &state.f {
        Some(f) => {
            let g = padded(f, domain, 0)?;
            check_grade(&g, Grade::BIVECTOR, 1e-10)?;
            g
        }
        None => half_f.clone(),
    };
    let dpsi = partials(&psi)?;
    let da = DiffOp::exterior().apply_grid(&a)?;
    let a_in = a.crop(domain)?;
    let ans_in = ans.crop(domain)?;

    let rows: Vec<[f64; 4]> = (0..domain.len())
        .into_par_iter()
        .map(|i| {
            let slash = dirac_parts(&dpsi.data[i]).slash;
            [
                (slash * g21 - a_in.data[i] * inner.data[i]).norm(),
                (f.data[i] - half_f.data[i]).norm(),
                (f.data[i] - da.data[i]).norm(),
                (a_in.data[i] - ans_in.data[i]).norm(),
            ]
        })
        .collect();
    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let mut rep = ResidualReport::on(*domain);
    for (k, name) in ["r1", "r2", "r3", "r4"].iter().enumerate() {
        rep.push(name, col(k));
    }
    Ok(rep)
}

/// x e^{γ₅·angle}, multiplied on the right.
fn gauge_phase(x: &Multivector, angle: f64) -> Multivector {
    *x * Multivector::from_complex(Complex64::from_polar(1.0, angle))
}

/// P±X = ½(X ∓ γ₅Xγ₂₁) on odd X.
fn odd_projector(x: &Multivector, plus: bool) -> Multivector {
    let t = Multivector::gamma5() * *x * Multivector::gamma21();
    if plus {
        (*x - t) * 0.5
    } else {
        (*x + t) * 0.5
    }
}

/// Gauge behaviour of ∂χγ₂₁ + gBχ for the Weyl parts of ψ, and the parity
/// split of the same operator on ψ↑.
///
/// Columns:
/// - `plus_invariance`: |‖R(ψ₊e^{gγ₅θ}, B+∂θ)‖ − ‖R(ψ₊, B)‖|
/// - `minus_invariance`: the same for ψ₋ with phase e^{−gγ₅θ}
/// - `parity_split`: ‖R(ψ↑) − R(ψ↑₊) − R(ψ↑₋)‖ + ‖P₋R(ψ↑) − R(ψ↑₊)‖ +
///   ‖P₊R(ψ↑) − R(ψ↑₋)‖, relative to Σ_μ‖∂_μψ↑‖ + |g|‖B‖‖ψ↑‖
///
/// Informational: `plus_covariance` ‖R' − Re^{gγ₅θ}‖, `minus_same_phase`
/// (ψ₋ with e^{+gγ₅θ}) and `parity_gamma5_coupling`, the change in the
/// split equations when gB is replaced by gγ₅B.
pub fn weyl_gauge_check(
    psi: &MultivectorField,
    b: &MultivectorField,
    g: f64,
    theta: &MultivectorField,
    domain: &LatticeSpec,
) -> Result<ResidualReport> {
    let psi = even_grid(psi, domain, 1)?;
    let bg = padded(b, domain, 0)?;
    check_grade(&bg, Grade::VECTOR, 1e-10)?;
    let th = padded(theta, domain, 1)?;
    check_grade(&th, Grade::SCALAR, 1e-10)?;
    let dth = partials(&th)?;

    let split = psi.map(|m| {
        let (p, q) = weyl_split(&EvenMultivector::project(m));
        (p.to_multivector(), q.to_multivector())
    });
    let plus = split.map(|s| s.0);
    let minus = split.map(|s| s.1);
    let ring = psi.spec;
    let phased = |x: &Grid, sign: f64| -> Grid {
        Grid { spec: ring, data: (0..ring.len()).into_par_iter().map(|i| gauge_phase(&x.data[i], sign * g * th.data[i].scalar_part())).collect() }
    };
    let up = psi.map(|m| parity_eigenstates(&EvenMultivector::project(m)).0.to_multivector());
    let up_split = up.map(|m| {
        let (p, q) = weyl_split(&EvenMultivector::project(m));
        (p.to_multivector(), q.to_multivector())
    });
    let up_plus = up_split.map(|s| s.0);
    let up_minus = up_split.map(|s| s.1);

    let grids = [
        &plus,
        &phased(&plus, 1.0),
        &minus,
        &phased(&minus, -1.0),
        &phased(&minus, 1.0),
        &up,
        &up_plus,
        &up_minus,
    ];
    let crops = grids.iter().map(|x| x.crop(domain)).collect::<Result<Vec<_>>>()?;
    let parts = grids.iter().map(|x| partials(x)).collect::<Result<Vec<_>>>()?;
    let g21 = Multivector::gamma21();
    let g5 = Multivector::gamma5();

    let rows: Vec<[f64; 6]> = (0..domain.len())
        .into_par_iter()
        .map(|i| {
            let bv = bg.data[i];
            let bprime = bv + dirac_parts(&dth.data[i]).slash;
            let angle = g * th.data[ring.flat_index(domain.multi_index(i).map(|v| v + 1))].scalar_part();
            let op = |k: usize, field_b: Multivector| {
                dirac_parts(&parts[k].data[i]).slash * g21 + field_b * crops[k].data[i] * g
            };
            let r_plus = op(0, bv);
            let r_plus_g = op(1, bprime);
            let r_minus = op(2, bv);
            let r_minus_g = op(3, bprime);
            let r_minus_same = op(4, bprime);
            let r_up = op(5, bv);
            let r_up_plus = op(6, bv);
            let r_up_minus = op(7, bv);
            let split_gap = (r_up - r_up_plus - r_up_minus).norm()
                + (odd_projector(&r_up, false) - r_up_plus).norm()
                + (odd_projector(&r_up, true) - r_up_minus).norm();
            let scale = parts[5].data[i].iter().map(Multivector::norm).sum::<f64>()
                + g.abs() * bv.norm() * crops[5].data[i].norm();
            let coupling = ((g5 - Multivector::ONE) * bv * crops[6].data[i] * g).norm()
                + ((g5 - Multivector::ONE) * bv * crops[7].data[i] * g).norm();
            [
                (r_plus_g.norm() - r_plus.norm()).abs(),
                (r_minus_g.norm() - r_minus.norm()).abs(),
                if scale > 0.0 { split_gap / scale } else { split_gap },
                (r_plus_g - gauge_phase(&r_plus, angle)).norm(),
                (r_minus_same.norm() - r_minus.norm()).abs(),
                coupling,
            ]
        })
        .collect();
    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let mut rep = ResidualReport::on(*domain);
    rep.push("plus_invariance", col(0));
    rep.push("minus_invariance", col(1));
    rep.push("parity_split", col(2));
    rep.push_info("plus_covariance", col(3));
    rep.push_info("minus_same_phase", col(4));
    rep.push_info("parity_gamma5_coupling", col(5));
    Ok(rep)
}
