use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::blade::{
    grade_of, involution_sign, ordered_blade, reverse_sign, ProductKind, BLADES, METRIC, SIGNS,
    VOLUME,
};
use crate::error::{Error, Result};

/// A grade index in 0..=4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Grade(u8);

impl Grade {
    pub const SCALAR: Grade = Grade(0);
    pub const VECTOR: Grade = Grade(1);
    pub const BIVECTOR: Grade = Grade(2);
    pub const TRIVECTOR: Grade = Grade(3);
    pub const PSEUDOSCALAR: Grade = Grade(4);

    pub fn new(k: u8) -> Result<Self> {
        Grade::try_from(k)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Grade> {
        (0..=4).map(Grade)
    }
}

impl TryFrom<u8> for Grade {
    type Error = Error;
    fn try_from(k: u8) -> Result<Self> {
        if k <= 4 {
            Ok(Grade(k))
        } else {
            Err(Error::InvalidGrade(k))
        }
    }
}

impl From<Grade> for u8 {
    fn from(g: Grade) -> u8 {
        g.0
    }
}

/// An element of Cl(1,3): 16 real coefficients in blade-bitmask order over
/// the upper-index basis (bit μ set means γ^μ is a factor).
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multivector {
    coeffs: [f64; BLADES],
}

impl Multivector {
    pub const ZERO: Multivector = Multivector { coeffs: [0.0; BLADES] };
    pub const ONE: Multivector = Multivector::scalar(1.0);

    pub const fn from_coeffs(coeffs: [f64; BLADES]) -> Self {
        Multivector { coeffs }
    }

    pub const fn scalar(s: f64) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[0] = s;
        Multivector { coeffs }
    }

    pub fn blade(mask: usize, value: f64) -> Self {
        let mut m = Multivector::ZERO;
        m.coeffs[mask] = value;
        m
    }

    /// Upper-index generator γ^μ.
    pub fn gamma_up(mu: usize) -> Self {
        Multivector::blade(1 << mu, 1.0)
    }

    /// Lower-index generator γ_μ = η_μμ γ^μ.
    pub fn gamma(mu: usize) -> Self {
        Multivector::blade(1 << mu, METRIC[mu])
    }

    /// Product of lower-index generators in the given order, e.g. `[2, 1]`
    /// is γ₂₁. `None` if an index repeats or exceeds 3.
    pub fn lowered(indices: &[usize]) -> Option<Self> {
        let (mask, mut sign) = ordered_blade(indices)?;
        for &i in indices {
            sign *= METRIC[i];
        }
        Some(Multivector::blade(mask, sign))
    }

    /// The volume element γ^5 = γ^0γ^1γ^2γ^3 (used by the Hodge star).
    pub fn volume() -> Self {
        Multivector::blade(VOLUME, 1.0)
    }

    /// γ₅ = γ_0γ_1γ_2γ_3 = −γ^5, the chirality element used by the physics
    /// formulas (duality rotations, Weyl projectors, E/B split).
    pub fn gamma5() -> Self {
        Multivector::blade(VOLUME, -1.0)
    }

    /// γ₂₁ = γ_2γ_1, the reference bivector of the inversion problem.
    pub fn gamma21() -> Self {
        Multivector::blade(0b0110, -1.0)
    }

    pub fn coeffs(&self) -> &[f64; BLADES] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64; BLADES] {
        &mut self.coeffs
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, value: f64) {
        self.coeffs[mask] = value;
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient along γ₅ (so that `s + p γ₅` has `p` here).
    pub fn gamma5_part(&self) -> f64 {
        -self.coeffs[VOLUME]
    }

    /// Reads the scalar + γ₅ part as the complex number `s + i p`.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.coeffs[0], self.gamma5_part())
    }

    /// Inverse of [`Multivector::to_complex`]: `a + i b ↦ a + b γ₅`.
    pub fn from_complex(z: Complex64) -> Self {
        let mut m = Multivector::scalar(z.re);
        m.coeffs[VOLUME] = -z.im;
        m
    }

    /// Multiplies by `a + b γ₅` on the left.
    pub fn complex_scale(&self, z: Complex64) -> Self {
        *self * z.re + Multivector::gamma5() * *self * z.im
    }

    fn product(&self, other: &Self, kind: ProductKind) -> Self {
        let mut out = [0.0; BLADES];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                if y == 0.0 || !kind.keeps(a, b) {
                    continue;
                }
                out[a ^ b] += SIGNS[a][b] * x * y;
            }
        }
        Multivector { coeffs: out }
    }

    pub fn geometric(&self, other: &Self) -> Self {
        self.product(other, ProductKind::Geometric)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.product(other, ProductKind::Wedge)
    }

    pub fn left_contract(&self, other: &Self) -> Self {
        self.product(other, ProductKind::LeftContraction)
    }

    pub fn right_contract(&self, other: &Self) -> Self {
        self.product(other, ProductKind::RightContraction)
    }

    /// A·B = Σ_k ⟨Ã_k B_k⟩₀. Cross-grade pairs do not contribute.
    pub fn scalar_product(&self, other: &Self) -> f64 {
        (0..BLADES)
            .map(|b| reverse_sign(b) * SIGNS[b][b] * self.coeffs[b] * other.coeffs[b])
            .sum()
    }

    pub fn reverse(&self) -> Self {
        self.map_blades(reverse_sign)
    }

    pub fn involute(&self) -> Self {
        self.map_blades(involution_sign)
    }

    pub fn conjugate(&self) -> Self {
        self.reverse().involute()
    }

    fn map_blades(&self, sign: fn(usize) -> f64) -> Self {
        let mut out = self.coeffs;
        for (b, c) in out.iter_mut().enumerate() {
            *c *= sign(b);
        }
        Multivector { coeffs: out }
    }

    pub fn grade_project(&self, k: Grade) -> Self {
        let mut out = [0.0; BLADES];
        for (b, c) in out.iter_mut().enumerate() {
            if grade_of(b) == u32::from(k.0) {
                *c = self.coeffs[b];
            }
        }
        Multivector { coeffs: out }
    }

    pub fn even(&self) -> Self {
        self.filter(|b| grade_of(b) % 2 == 0)
    }

    pub fn odd(&self) -> Self {
        self.filter(|b| grade_of(b) % 2 == 1)
    }

    fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = self.coeffs;
        for (b, c) in out.iter_mut().enumerate() {
            if !keep(b) {
                *c = 0.0;
            }
        }
        Multivector { coeffs: out }
    }

    /// ⋆A = Ã γ^5.
    pub fn hodge_star(&self) -> Self {
        self.reverse() * Multivector::volume()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Norm of the components outside grade `k`.
    pub fn off_grade_norm(&self, k: Grade) -> f64 {
        (*self - self.grade_project(k)).norm()
    }

    /// Errors unless everything outside grade `k` is below `rel` × norm.
    pub fn expect_grade(&self, k: Grade, rel: f64) -> Result<()> {
        let leak = self.off_grade_norm(k);
        if leak <= rel * self.norm().max(f64::MIN_POSITIVE) {
            Ok(())
        } else {
            Err(Error::WrongGrade { expected: k.0, leak })
        }
    }

    pub fn is_grade(&self, k: Grade) -> bool {
        self.expect_grade(k, 1e-12).is_ok()
    }

    pub fn nan() -> Self {
        Multivector { coeffs: [f64::NAN; BLADES] }
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector({self})")
    }
}

const BLADE_LABELS: [&str; BLADES] = [
    "1", "g^0", "g^1", "g^01", "g^2", "g^02", "g^12", "g^012", "g^3", "g^03", "g^13", "g^013",
    "g^23", "g^023", "g^123", "g^0123",
];

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if b == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{}", BLADE_LABELS[b])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl From<f64> for Multivector {
    fn from(s: f64) -> Self {
        Multivector::scalar(s)
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.geometric(&rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, s: f64) -> Multivector {
        self *= s;
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m * self
    }
}

impl MulAssign<f64> for Multivector {
    fn mul_assign(&mut self, s: f64) {
        for c in self.coeffs.iter_mut() {
            *c *= s;
        }
    }
}

impl Div<f64> for Multivector {
    type Output = Multivector;
    fn div(self, s: f64) -> Multivector {
        self * (1.0 / s)
    }
}

impl std::iter::Sum for Multivector {
    fn sum<I: Iterator<Item = Multivector>>(iter: I) -> Multivector {
        iter.fold(Multivector::ZERO, |a, b| a + b)
    }
}
