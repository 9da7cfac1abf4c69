//! The complexified algebra C ⊗ Cl(1,3), its image in 4×4 Dirac matrices,
//! and the translation between column spinors and even multivectors.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::blade::{BLADES, SIGNS};
use crate::algebra::{EvenMultivector, Multivector};
use crate::error::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Sixteen complex coefficients in the blade order of [`Multivector`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMultivector {
    coeffs: [Complex64; BLADES],
}

impl ComplexMultivector {
    pub const ZERO: ComplexMultivector = ComplexMultivector { coeffs: [C0; BLADES] };

    pub fn new(re: &Multivector, im: &Multivector) -> Self {
        let mut coeffs = [C0; BLADES];
        for (b, c) in coeffs.iter_mut().enumerate() {
            *c = Complex64::new(re.get(b), im.get(b));
        }
        ComplexMultivector { coeffs }
    }

    pub fn real(m: &Multivector) -> Self {
        ComplexMultivector::new(m, &Multivector::ZERO)
    }

    pub fn imag(m: &Multivector) -> Self {
        ComplexMultivector::new(&Multivector::ZERO, m)
    }

    pub fn re(&self) -> Multivector {
        Multivector::from_coeffs(self.coeffs.map(|c| c.re))
    }

    pub fn im(&self) -> Multivector {
        Multivector::from_coeffs(self.coeffs.map(|c| c.im))
    }

    pub fn coeffs(&self) -> &[Complex64; BLADES] {
        &self.coeffs
    }

    pub fn scale(&self, z: Complex64) -> Self {
        ComplexMultivector { coeffs: self.coeffs.map(|c| c * z) }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Add for ComplexMultivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMultivector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-C1)
    }
}

impl Mul for ComplexMultivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [C0; BLADES];
        for (a, x) in self.coeffs.iter().enumerate() {
            if *x == C0 {
                continue;
            }
            for (b, y) in rhs.coeffs.iter().enumerate() {
                if *y == C0 {
                    continue;
                }
                out[a ^ b] += x * y * SIGNS[a][b];
            }
        }
        ComplexMultivector { coeffs: out }
    }
}

/// A 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrix(pub [[Complex64; 4]; 4]);

impl DiracMatrix {
    pub const ZERO: DiracMatrix = DiracMatrix([[C0; 4]; 4]);

    pub fn identity() -> Self {
        let mut m = DiracMatrix::ZERO;
        for i in 0..4 {
            m.0[i][i] = C1;
        }
        m
    }

    pub fn scale(&self, z: Complex64) -> Self {
        DiracMatrix(self.0.map(|row| row.map(|c| c * z)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn column(&self, j: usize) -> [Complex64; 4] {
        std::array::from_fn(|i| self.0[i][j])
    }

    /// Numerical rank by Gaussian elimination with partial pivoting.
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.0;
        let mut rank = 0;
        for col in 0..4 {
            let pivot = (rank..4).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()));
            let Some(p) = pivot else { break };
            if a[p][col].norm() <= tol {
                continue;
            }
            a.swap(rank, p);
            for i in rank + 1..4 {
                let f = a[i][col] / a[rank][col];
                for j in col..4 {
                    let v = a[rank][j];
                    a[i][j] -= f * v;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Add for DiracMatrix {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for DiracMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-C1)
    }
}

impl Mul for DiracMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = DiracMatrix::ZERO;
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == C0 {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

/// Standard Dirac matrices for the lower-index generators γ_μ:
/// γ_0 = diag(1, 1, −1, −1), γ_i = [[0, σ_i], [−σ_i, 0]].
pub fn dirac_lower(mu: usize) -> DiracMatrix {
    let pauli: [[[Complex64; 2]; 2]; 3] = [
        [[C0, C1], [C1, C0]],
        [[C0, -CI], [CI, C0]],
        [[C1, C0], [C0, -C1]],
    ];
    let mut m = DiracMatrix::ZERO;
    if mu == 0 {
        for i in 0..4 {
            m.0[i][i] = if i < 2 { C1 } else { -C1 };
        }
        return m;
    }
    let s = pauli[mu - 1];
    for i in 0..2 {
        for j in 0..2 {
            m.0[i][j + 2] = s[i][j];
            m.0[i + 2][j] = -s[i][j];
        }
    }
    m
}

fn blade_images() -> &'static [DiracMatrix; BLADES] {
    static TABLE: OnceLock<[DiracMatrix; BLADES]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // γ^0 = γ_0 and γ^i = −γ_i; blades are ascending generator products.
        let up: [DiracMatrix; 4] = std::array::from_fn(|mu| {
            let m = dirac_lower(mu);
            if mu == 0 {
                m
            } else {
                m.scale(-C1)
            }
        });
        std::array::from_fn(|mask| {
            (0..4)
                .filter(|mu| mask >> mu & 1 == 1)
                .fold(DiracMatrix::identity(), |acc, mu| acc * up[mu])
        })
    })
}

/// Matrix image of a complexified multivector (a homomorphism).
pub fn matrix_rep(a: &ComplexMultivector) -> DiracMatrix {
    let images = blade_images();
    let mut out = DiracMatrix::ZERO;
    for (b, c) in a.coeffs.iter().enumerate() {
        if *c != C0 {
            out = out + images[b].scale(*c);
        }
    }
    out
}

pub fn matrix_rep_real(a: &Multivector) -> DiracMatrix {
    matrix_rep(&ComplexMultivector::real(a))
}

/// The primitive idempotent f = ½(1 + γ_0)·½(1 + iγ_1γ_2).
pub fn idempotent_f() -> ComplexMultivector {
    let a = ComplexMultivector::real(&((Multivector::ONE + Multivector::gamma(0)) * 0.5));
    let g12 = Multivector::lowered(&[1, 2]).expect("distinct indices");
    let b = ComplexMultivector::new(&(Multivector::ONE * 0.5), &(g12 * 0.5));
    a * b
}

/// The generators Δ_0..Δ_4 of Cl(4,1) in the matrix image, with
/// Δ_4 = i·γ₅ and Δ_μ = γ_μ Δ_4, so that γ_μ = Δ_μ Δ_4.
pub fn cl41_generators() -> [DiracMatrix; 5] {
    let d4 = matrix_rep_real(&Multivector::gamma5()).scale(CI);
    let mut out = [DiracMatrix::ZERO; 5];
    for (mu, slot) in out.iter_mut().take(4).enumerate() {
        *slot = dirac_lower(mu) * d4;
    }
    out[4] = d4;
    out
}

/// A four-component column spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSpinor(pub [Complex64; 4]);

impl DiracSpinor {
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn to_interleaved(&self) -> [f64; 8] {
        std::array::from_fn(|k| if k % 2 == 0 { self.0[k / 2].re } else { self.0[k / 2].im })
    }

    pub fn from_interleaved(v: [f64; 8]) -> Self {
        DiracSpinor(std::array::from_fn(|i| Complex64::new(v[2 * i], v[2 * i + 1])))
    }

    /// Reads the first column of `m`, requiring the other three to vanish
    /// relative to it.
    pub fn from_first_column(m: &DiracMatrix, rel_tol: f64) -> Result<Self> {
        let first = m.column(0);
        let scale = first.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        for j in 1..4 {
            let norm = m.column(j).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > rel_tol * scale {
                return Err(Error::NonzeroColumn { column: j, norm });
            }
        }
        Ok(DiracSpinor(first))
    }
}

impl Serialize for DiracSpinor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_interleaved().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiracSpinor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 8]>::deserialize(d).map(DiracSpinor::from_interleaved)
    }
}

/// ψ ↦ (s − i b₁₂, −b₁₃ − i b₂₃, −b₀₃ + i p, −b₀₁ − i b₀₂), the first column
/// of the matrix image of ψf.
pub fn dh_to_dirac(psi: &EvenMultivector) -> DiracSpinor {
    DiracSpinor([
        Complex64::new(psi.s, -psi.b12),
        Complex64::new(-psi.b13, -psi.b23),
        Complex64::new(-psi.b03, psi.p),
        Complex64::new(-psi.b01, -psi.b02),
    ])
}

pub fn dirac_to_dh(v: &DiracSpinor) -> EvenMultivector {
    let [a, b, c, d] = v.0;
    EvenMultivector {
        s: a.re,
        b12: -a.im,
        b13: -b.re,
        b23: -b.im,
        b03: -c.re,
        p: c.im,
        b01: -d.re,
        b02: -d.im,
    }
}

/// Column spinor read off the matrix image of ψf.
pub fn dirac_column_of(psi: &EvenMultivector) -> Result<DiracSpinor> {
    let pf = ComplexMultivector::real(&psi.to_multivector()) * idempotent_f();
    DiracSpinor::from_first_column(&matrix_rep(&pf), 1e-12)
}

/// ψ± = ½(ψ ∓ γ₅ψγ₂₁); returns (ψ₊, ψ₋).
pub fn weyl_split(psi: &EvenMultivector) -> (EvenMultivector, EvenMultivector) {
    let m = psi.to_multivector();
    let t = Multivector::gamma5() * m * Multivector::gamma21();
    (
        EvenMultivector::project(&((m - t) * 0.5)),
        EvenMultivector::project(&((m + t) * 0.5)),
    )
}

/// Pψ = −γ_0ψγ_0.
pub fn parity_apply(psi: &EvenMultivector) -> EvenMultivector {
    let g0 = Multivector::gamma(0);
    EvenMultivector::project(&-(g0 * psi.to_multivector() * g0))
}

/// ψ↑ = γ_0ψ₋γ_0 − ψ₋ and ψ↓ = γ_0ψ₊γ_0 + ψ₊.
pub fn parity_eigenstates(psi: &EvenMultivector) -> (EvenMultivector, EvenMultivector) {
    let g0 = Multivector::gamma(0);
    let (plus, minus) = weyl_split(psi);
    let (p, m) = (plus.to_multivector(), minus.to_multivector());
    (
        EvenMultivector::project(&(g0 * m * g0 - m)),
        EvenMultivector::project(&(g0 * p * g0 + p)),
    )
}
