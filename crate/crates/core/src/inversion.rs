//! Solving F = ψγ₂₁ψ̃ for ψ, the bilinear covariants of a spinor, the
//! Fierz/Crawford identities they satisfy, and reconstruction of ψ from them.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{exp_bivector, EvenMultivector, Grade, Multivector};
use crate::complexified::{dirac_to_dh, idempotent_f, matrix_rep, ComplexMultivector, DiracSpinor};
use crate::equivalence::canonical::{canonical_decompose, sigma_omega, SINGULAR_EPS};
use crate::error::{Error, Result};

/// Relative threshold on |F²| against ‖F‖² below which F counts as null.
pub const NULL_EPS: f64 = 1e-10;

/// Below this |1 − z| the particular rotor is built through a pre-rotation.
pub const FALLBACK_EPS: f64 = 1e-6;

fn sigma(i: usize) -> Multivector {
    Multivector::gamma(i) * Multivector::gamma(0)
}

/// Electric and magnetic parts of F = Eⁱσ_i + γ₅Bʲσ_j, σ_i = γ_iγ_0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EBSplit {
    pub e: [f64; 3],
    pub b: [f64; 3],
}

impl EBSplit {
    pub fn assemble(&self) -> Multivector {
        let g5 = Multivector::gamma5();
        (0..3)
            .map(|i| sigma(i + 1) * self.e[i] + g5 * sigma(i + 1) * self.b[i])
            .sum()
    }
}

pub fn eb_split(f: &Multivector) -> Result<EBSplit> {
    f.expect_grade(Grade::BIVECTOR, 1e-12)?;
    let g5 = Multivector::gamma5();
    let e = std::array::from_fn(|i| (*f * sigma(i + 1)).scalar_part());
    let b = std::array::from_fn(|i| -(*f * g5 * sigma(i + 1)).scalar_part());
    Ok(EBSplit { e, b })
}

/// (ρ, β) with F² = −ρ²e^{2γ₅β}, ρ > 0 and β ∈ (−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldInvariants {
    pub i1: f64,
    pub i2: f64,
    pub rho: f64,
    pub beta: f64,
}

impl FieldInvariants {
    /// The unit bivector f = F e^{−γ₅β}/ρ, with f² = −1.
    pub fn unit_field(&self, f: &Multivector) -> Multivector {
        f.complex_scale(Complex64::from_polar(1.0 / self.rho, -self.beta))
    }
}

pub fn field_invariants(f: &Multivector) -> Result<FieldInvariants> {
    let eb = eb_split(f)?;
    let i1 = eb.e.iter().map(|x| x * x).sum::<f64>() - eb.b.iter().map(|x| x * x).sum::<f64>();
    let i2 = (0..3).map(|i| eb.e[i] * eb.b[i]).sum::<f64>();
    let w = Complex64::new(i1, 2.0 * i2);
    let modulus = w.norm();
    if modulus <= NULL_EPS * f.norm_sq() || modulus == 0.0 {
        return Err(Error::NullField { modulus });
    }
    let beta = 0.5 * (-w).arg();
    Ok(FieldInvariants { i1, i2, rho: modulus.sqrt(), beta })
}

/// Rotor L with Lγ₂₁L̃ = f for a unit bivector f (f² = −1).
///
/// L = (γ₂₁ + f)/√(2(1 − z)) where z = ½(fγ₂₁ + γ₂₁f) is scalar plus
/// pseudoscalar. Near f = −γ₂₁ the denominator vanishes; there f is first
/// turned by the fixed rotor Q = exp(γ₁₃π/4) and L = Q·L(Q̃fQ).
pub fn particular_rotor(f: &Multivector) -> Result<EvenMultivector> {
    f.expect_grade(Grade::BIVECTOR, 1e-10)?;
    let defect = (*f * *f + Multivector::ONE).norm();
    if defect > 1e-8 {
        return Err(Error::NotUnitBivector(defect));
    }
    match rotor_direct(f) {
        Ok(l) => Ok(l),
        Err(Error::DegenerateDenominator(_)) => {
            let q = exp_bivector(&(Multivector::lowered(&[1, 3]).expect("distinct") * FRAC_PI_4))?;
            let turned = q.reverse() * *f * q;
            let l = rotor_direct(&turned)?;
            Ok(EvenMultivector::project(&(q * l.to_multivector())))
        }
        Err(e) => Err(e),
    }
}

fn rotor_direct(f: &Multivector) -> Result<EvenMultivector> {
    let g21 = Multivector::gamma21();
    let z = ((*f * g21 + g21 * *f) * 0.5).to_complex();
    let one_minus = Complex64::new(1.0, 0.0) - z;
    if one_minus.norm() < FALLBACK_EPS {
        return Err(Error::DegenerateDenominator(one_minus.norm()));
    }
    let root = (one_minus * 2.0).sqrt();
    Ok(EvenMultivector::project(&(g21 + *f).complex_scale(root.inv())))
}

/// S(ν, φ) = exp(γ₀₃ν) exp(γ₂₁φ), the stabilizer of γ₂₁.
pub fn stability_element(nu: f64, phi: f64) -> EvenMultivector {
    let g03 = Multivector::lowered(&[0, 3]).expect("distinct");
    let boost = exp_bivector(&(g03 * nu)).expect("bivector");
    let turn = exp_bivector(&(Multivector::gamma21() * phi)).expect("bivector");
    EvenMultivector::project(&(boost * turn))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionSolution {
    pub l: EvenMultivector,
    pub nu: f64,
    pub phi: f64,
    pub psi: EvenMultivector,
    pub invariants: FieldInvariants,
}

/// ψ = √ρ e^{γ₅β/2} L S(ν, φ); (ν, φ) are free.
pub fn invert_field(f: &Multivector, nu: f64, phi: f64) -> Result<InversionSolution> {
    let inv = field_invariants(f)?;
    let unit = inv.unit_field(f);
    let l = particular_rotor(&unit)?;
    let s = stability_element(nu, phi);
    let amp = Complex64::from_polar(inv.rho.sqrt(), inv.beta / 2.0);
    let psi = (l.to_multivector() * s.to_multivector()).complex_scale(amp);
    Ok(InversionSolution { l, nu, phi, psi: EvenMultivector::project(&psi), invariants: inv })
}

/// σ, ω, J = ψγ_0ψ̃, K = ψγ_3ψ̃, F = ψγ₂₁ψ̃ and the spin bivector ½Rγ₂₁R̃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearSet {
    pub sigma: f64,
    pub omega: f64,
    pub j: Multivector,
    pub k: Multivector,
    pub f: Multivector,
    pub sspin: Option<Multivector>,
}

pub fn bilinear_covariants(psi: &EvenMultivector) -> BilinearSet {
    let m = psi.to_multivector();
    let rev = m.reverse();
    let z = sigma_omega(&m);
    let sspin = canonical_decompose(psi).ok().map(|c| {
        let r = c.rotor.to_multivector();
        (r * Multivector::gamma21() * r.reverse() * 0.5).grade_project(Grade::BIVECTOR)
    });
    BilinearSet {
        sigma: z.re,
        omega: z.im,
        j: (m * Multivector::gamma(0) * rev).grade_project(Grade::VECTOR),
        k: (m * Multivector::gamma(3) * rev).grade_project(Grade::VECTOR),
        f: (m * Multivector::gamma21() * rev).grade_project(Grade::BIVECTOR),
        sspin,
    }
}

/// One identity check: `value` is the absolute defect, `scale` its natural
/// magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub value: f64,
    pub scale: f64,
}

impl IdentityResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value / self.scale
        } else {
            self.value
        }
    }
}

/// Fierz and Crawford identities in the orientation where F = ψγ₂₁ψ̃ and
/// γ₅ = γ_0γ_1γ_2γ_3:
///
/// J² = σ²+ω² = −K², J·K = 0, J∧K = (ω+γ₅σ)F,
/// F⌞J = −ωK, (γ₅F)⌞J = −σK, F⌞K = −ωJ, (γ₅F)⌞K = −σJ,
/// F·F = σ²−ω², (γ₅F)·F = −2σω,
/// JF = (ω+γ₅σ)K, KF = (ω+γ₅σ)J, F² = ω²−σ²−2γ₅σω, F⁻¹ = KFK/(ω²+σ²)².
pub fn identity_residuals(b: &BilinearSet) -> Vec<IdentityResidual> {
    let (s, w) = (b.sigma, b.omega);
    let (j, k, f) = (b.j, b.k, b.f);
    let g5 = Multivector::gamma5();
    let rho2 = s * s + w * w;
    let sc = |sv: f64| Multivector::scalar(sv);
    let dual = Multivector::from_complex(Complex64::new(w, s));
    let g5f = g5 * f;
    let mut out = vec![
        ("fierz_j_squared", (j * j - sc(rho2)).norm(), rho2),
        ("fierz_k_squared", (k * k + sc(rho2)).norm(), rho2),
        ("fierz_j_dot_k", j.scalar_product(&k).abs(), rho2),
        ("fierz_j_wedge_k", (j.wedge(&k) - dual * f).norm(), rho2),
        ("crawford_f_rc_j", (f.right_contract(&j) + k * w).norm(), rho2),
        ("crawford_g5f_rc_j", (g5f.right_contract(&j) + k * s).norm(), rho2),
        ("crawford_f_dot_f", (f.scalar_product(&f) - (s * s - w * w)).abs(), rho2),
        ("crawford_f_rc_k", (f.right_contract(&k) + j * w).norm(), rho2),
        ("crawford_g5f_rc_k", (g5f.right_contract(&k) + j * s).norm(), rho2),
        ("crawford_g5f_dot_f", (g5f.scalar_product(&f) + 2.0 * s * w).abs(), rho2),
        ("crawford_jf", (j * f - dual * k).norm(), rho2),
        ("crawford_kf", (k * f - dual * j).norm(), rho2),
        (
            "crawford_f_squared",
            (f * f - Multivector::from_complex(Complex64::new(w * w - s * s, -2.0 * s * w))).norm(),
            rho2,
        ),
    ]
    .into_iter()
    .map(|(name, value, scale)| IdentityResidual { name, value, scale })
    .collect::<Vec<_>>();
    if rho2 > 0.0 {
        let f2 = (f * f).to_complex();
        let finv = f.complex_scale(f2.inv());
        let kfk = k * f * k / (rho2 * rho2);
        out.push(IdentityResidual {
            name: "crawford_f_inverse",
            value: (finv - kfk).norm(),
            // Size of the computed product, not of F⁻¹ itself: near-singular
            // ψ lose (‖ψ‖²/ρ)³ to cancellation in KFK/ρ⁴.
            scale: k.norm() * k.norm() * f.norm() / (rho2 * rho2),
        });
    }
    out
}

/// Rebuilds ψ (up to the right γ₂₁ phase) from its bilinears through the
/// aggregate 𝔅 = σ + J − iF − iγ₅K + γ₅ω: the matrix image of 𝔅f has a
/// single nonzero column proportional to the column spinor of ψ.
pub fn boomerang_reconstruct(b: &BilinearSet) -> Result<EvenMultivector> {
    let rho = b.sigma.hypot(b.omega);
    let scale = b.j.norm().max(b.f.norm()).max(rho);
    if rho <= SINGULAR_EPS * scale || rho == 0.0 {
        return Err(Error::SingularInput(format!("sigma^2 + omega^2 = {:e}", rho * rho)));
    }
    let g5 = Multivector::gamma5();
    let re = Multivector::scalar(b.sigma) + b.j + g5 * b.omega;
    let im = -(b.f + g5 * b.k);
    let boom = ComplexMultivector::new(&re, &im) * idempotent_f();
    let column = DiracSpinor::from_first_column(&matrix_rep(&boom), 1e-8)
        .map_err(|e| Error::SingularInput(e.to_string()))?;
    let norm = column.norm_sq().sqrt();
    let lead = column
        .0
        .iter()
        .find(|c| c.norm() > 1e-12 * norm)
        .copied()
        .ok_or_else(|| Error::SingularInput("boomerang column vanishes".into()))?;
    let phase = lead.conj() / lead.norm();
    let rotated = DiracSpinor(column.0.map(|c| c * phase));
    let raw = dirac_to_dh(&rotated).to_multivector();
    let raw_rho = sigma_omega(&raw).norm();
    let psi = raw * (rho / raw_rho).sqrt();
    Ok(EvenMultivector::project(&psi))
}


#[cfg(test)]
mod random_checks {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identities_on_random_spinors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let c: [f64; 8] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let psi = EvenMultivector::from_array(c);
            let b = bilinear_covariants(&psi);
            for r in identity_residuals(&b) {
                assert!(r.relative() < 1e-10, "{} {} {}", r.name, r.value, r.scale);
            }
            let back = boomerang_reconstruct(&b).unwrap();
            let b2 = bilinear_covariants(&back);
            assert!((b2.j - b.j).norm() < 1e-10 * b.j.norm());
            assert!((b2.f - b.f).norm() < 1e-10 * b.j.norm());
            assert!((b2.k - b.k).norm() < 1e-10 * b.j.norm());
        }
    }
}
