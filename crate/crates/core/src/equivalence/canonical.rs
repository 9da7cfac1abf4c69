use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{EvenMultivector, Multivector};
use crate::error::{Error, Result};

/// Relative threshold on |ψψ̃| against ‖ψ‖² below which ψ counts as singular.
pub const SINGULAR_EPS: f64 = 1e-10;

/// ψ = √ρ e^{γ₅β/2} R with RR̃ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub rho: f64,
    pub beta: f64,
    pub rotor: EvenMultivector,
}

impl CanonicalForm {
    pub fn reassemble(&self) -> Multivector {
        let amp = Multivector::from_complex(Complex64::from_polar(self.rho.sqrt(), self.beta / 2.0));
        amp * self.rotor.to_multivector()
    }
}

/// ψψ̃ read as σ + iω (γ₅ ↔ i).
pub fn sigma_omega(psi: &Multivector) -> Complex64 {
    (*psi * psi.reverse()).to_complex()
}

pub fn canonical_decompose(psi: &EvenMultivector) -> Result<CanonicalForm> {
    let m = psi.to_multivector();
    let z = sigma_omega(&m);
    let rho = z.norm();
    if rho <= SINGULAR_EPS * m.norm_sq() || rho == 0.0 {
        return Err(Error::SingularSpinor { norm_sq: z.norm_sqr() });
    }
    let beta = z.arg();
    let unamp = Complex64::from_polar(1.0 / rho.sqrt(), -beta / 2.0);
    let rotor = EvenMultivector::project(&(m.complex_scale(unamp)));
    Ok(CanonicalForm { rho, beta, rotor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn scalar_two() {
        let c = canonical_decompose(&EvenMultivector { s: 2.0, ..Default::default() }).unwrap();
        assert_eq!((c.rho, c.beta), (4.0, 0.0));
        assert!((c.rotor.to_multivector() - Multivector::ONE).norm() < 1e-15);
    }

    #[test]
    fn one_plus_gamma5() {
        let psi = EvenMultivector::project(&(Multivector::ONE + Multivector::gamma5()));
        let c = canonical_decompose(&psi).unwrap();
        assert!((c.rho - 2.0).abs() < 1e-15);
        assert!((c.beta - FRAC_PI_2).abs() < 1e-15);
        assert!((c.rotor.to_multivector() - Multivector::ONE).norm() < 1e-15);
    }

    #[test]
    fn null_boost_is_singular() {
        let psi = EvenMultivector::project(&(Multivector::ONE + Multivector::lowered(&[0, 1]).unwrap()));
        assert!(canonical_decompose(&psi).is_err());
    }
}
