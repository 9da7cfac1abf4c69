use num_complex::Complex64;

use super::multivector::{Grade, Multivector};
use crate::error::Result;

/// Beyond this |B²| the closed form is abandoned for the series.
const CLOSED_FORM_LIMIT: f64 = 400.0;
const SERIES_TERMS: usize = 20;

/// Exponential of a bivector.
///
/// B² is always `σ + γ₅ω`, which commutes with B, so with `w = √(B²)`
/// (principal branch under γ₅ ↔ i) we have `exp B = cosh w + B sinh(w)/w`.
pub fn exp_bivector(b: &Multivector) -> Result<Multivector> {
    b.expect_grade(Grade::BIVECTOR, 1e-12)?;
    let b = b.grade_project(Grade::BIVECTOR);
    let z = (b * b).to_complex();
    if z.norm() > CLOSED_FORM_LIMIT {
        return Ok(exp_series(&b));
    }
    let (cosh, sinhc) = cosh_sinhc(z);
    Ok(Multivector::from_complex(cosh) + b.complex_scale(sinhc))
}

/// cosh(√z) and sinh(√z)/√z; both are entire in z.
fn cosh_sinhc(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 1e-3 {
        // Taylor in z keeps full precision near the removable point.
        let mut cosh = Complex64::new(0.0, 0.0);
        let mut sinhc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 0..8u32 {
            cosh += term / factorial(2 * k);
            sinhc += term / factorial(2 * k + 1);
            term *= z;
        }
        return (cosh, sinhc);
    }
    let w = z.sqrt();
    (w.cosh(), w.sinh() / w)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Truncated Taylor series with scaling and squaring. Valid for any
/// multivector argument.
pub fn exp_series(a: &Multivector) -> Multivector {
    let norm = a.norm();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = *a / f64::powi(2.0, squarings as i32);
    let mut sum = Multivector::ONE;
    let mut term = Multivector::ONE;
    for k in 1..=SERIES_TERMS {
        term = term * scaled / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Multivector, b: Multivector, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn euler_quarter_turn() {
        let g21 = Multivector::gamma21();
        let r = exp_bivector(&(g21 * FRAC_PI_2)).unwrap();
        assert!(close(r, g21, 1e-15));
    }

    #[test]
    fn zero_gives_one() {
        assert_eq!(exp_bivector(&Multivector::ZERO).unwrap(), Multivector::ONE);
    }

    #[test]
    fn boost_is_hyperbolic() {
        let g03 = Multivector::lowered(&[0, 3]).unwrap();
        let r = exp_bivector(&g03).unwrap();
        let series = exp_series(&g03);
        let want = Multivector::scalar(1f64.cosh()) + g03 * 1f64.sinh();
        assert!(close(r, want, 1e-15));
        assert!(close(series, want, 1e-14));
        assert!((r.scalar_part() - 1.5431).abs() < 1e-4);
    }

    #[test]
    fn rejects_vectors() {
        assert!(exp_bivector(&Multivector::gamma(0)).is_err());
    }

    #[test]
    fn large_argument_uses_series() {
        let b = Multivector::gamma21() * 30.0;
        let r = exp_bivector(&b).unwrap();
        let want = Multivector::scalar(30f64.cos()) + Multivector::gamma21() * 30f64.sin();
        assert!(close(r, want, 1e-11));
    }
}
