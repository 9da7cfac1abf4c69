use serde::{Deserialize, Serialize};

use super::blade::VOLUME;
use super::multivector::Multivector;
use crate::error::{Error, Result};

/// Relative singularity threshold for [`invert_even`]: σ²+ω² must exceed
/// this times ‖ψ‖⁴.
pub const INVERT_EPS: f64 = 1e-12;

/// An even element `s + ½ b_μν γ^μγ^ν + p γ^5`, the representative of a
/// Dirac-Hestenes spinor. `b_μν` is the coefficient of the upper-index blade
/// γ^μγ^ν (μ < ν) and `p` that of the volume element γ^5.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EvenMultivector {
    pub s: f64,
    pub b01: f64,
    pub b02: f64,
    pub b03: f64,
    pub b12: f64,
    pub b13: f64,
    pub b23: f64,
    pub p: f64,
}

const MASKS: [usize; 8] = [0, 0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100, VOLUME];

impl EvenMultivector {
    pub fn from_array(c: [f64; 8]) -> Self {
        EvenMultivector {
            s: c[0],
            b01: c[1],
            b02: c[2],
            b03: c[3],
            b12: c[4],
            b13: c[5],
            b23: c[6],
            p: c[7],
        }
    }

    pub fn to_array(&self) -> [f64; 8] {
        [self.s, self.b01, self.b02, self.b03, self.b12, self.b13, self.b23, self.p]
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut m = Multivector::ZERO;
        for (mask, v) in MASKS.iter().zip(self.to_array()) {
            m.set(*mask, v);
        }
        m
    }

    /// Keeps the even part and silently drops the odd one.
    pub fn project(m: &Multivector) -> Self {
        let mut c = [0.0; 8];
        for (slot, mask) in c.iter_mut().zip(MASKS) {
            *slot = m.get(mask);
        }
        EvenMultivector::from_array(c)
    }

    /// Accepts `m` only if its odd part is negligible.
    pub fn try_from_multivector(m: &Multivector) -> Result<Self> {
        let odd = m.odd().norm();
        if odd > 1e-12 * m.norm().max(1.0) {
            return Err(Error::NotEven(odd));
        }
        Ok(EvenMultivector::project(m))
    }

    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl From<EvenMultivector> for Multivector {
    fn from(e: EvenMultivector) -> Self {
        e.to_multivector()
    }
}

impl TryFrom<Multivector> for EvenMultivector {
    type Error = Error;
    fn try_from(m: Multivector) -> Result<Self> {
        EvenMultivector::try_from_multivector(&m)
    }
}

/// ψ⁻¹ = ψ̃ (σ − γ₅ω)/(σ² + ω²) with ψψ̃ = σ + γ₅ω.
pub fn invert_even(psi: &EvenMultivector) -> Result<EvenMultivector> {
    invert_even_with(psi, INVERT_EPS)
}

/// [`invert_even`] with an explicit relative tolerance on σ²+ω².
pub fn invert_even_with(psi: &EvenMultivector, rel_eps: f64) -> Result<EvenMultivector> {
    let m = psi.to_multivector();
    let z = (m * m.reverse()).to_complex();
    let norm_sq = z.norm_sqr();
    let scale = m.norm_sq();
    if norm_sq <= rel_eps * scale * scale || norm_sq == 0.0 {
        return Err(Error::SingularSpinor { norm_sq });
    }
    let inv = m.reverse().complex_scale(z.conj() / norm_sq);
    Ok(EvenMultivector::project(&inv))
}
