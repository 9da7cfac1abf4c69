use std::ops::{Add, Mul, Neg, Sub};

use super::blade::{grade_of, BLADES};
use super::multivector::{Grade, Multivector};

/// A real-linear map on Cl(1,3) stored as a 16×16 matrix in blade order.
///
/// Maps built from constant products have small-integer entries, so sums and
/// compositions of them are exact; an identity like d∘d = 0 shows up as an
/// exactly zero matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct LinearMap {
    m: [[f64; BLADES]; BLADES],
}

impl std::fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearMap").field("nonzero", &self.nonzero_count()).finish()
    }
}

impl LinearMap {
    pub const ZERO: LinearMap = LinearMap { m: [[0.0; BLADES]; BLADES] };

    pub fn identity() -> Self {
        let mut m = LinearMap::ZERO;
        for i in 0..BLADES {
            m.m[i][i] = 1.0;
        }
        m
    }

    /// Tabulates any linear function of a multivector.
    pub fn from_fn(f: impl Fn(&Multivector) -> Multivector) -> Self {
        let mut out = LinearMap::ZERO;
        for col in 0..BLADES {
            let image = f(&Multivector::blade(col, 1.0));
            for row in 0..BLADES {
                out.m[row][col] = image.get(row);
            }
        }
        out
    }

    pub fn left_mul(a: &Multivector) -> Self {
        LinearMap::from_fn(|x| *a * *x)
    }

    pub fn right_mul(a: &Multivector) -> Self {
        LinearMap::from_fn(|x| *x * *a)
    }

    pub fn left_wedge(a: &Multivector) -> Self {
        LinearMap::from_fn(|x| a.wedge(x))
    }

    pub fn left_contraction(a: &Multivector) -> Self {
        LinearMap::from_fn(|x| a.left_contract(x))
    }

    pub fn grade(k: Grade) -> Self {
        let mut out = LinearMap::ZERO;
        for b in 0..BLADES {
            if grade_of(b) == u32::from(k.get()) {
                out.m[b][b] = 1.0;
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for c in row.iter_mut() {
                *c *= s;
            }
        }
        out
    }

    pub fn apply(&self, x: &Multivector) -> Multivector {
        let mut out = [0.0; BLADES];
        let xs = x.coeffs();
        for (o, row) in out.iter_mut().zip(&self.m) {
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(xs) {
                if *a != 0.0 {
                    acc += a * b;
                }
            }
            *o = acc;
        }
        Multivector::from_coeffs(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Self {
        let mut out = LinearMap::ZERO;
        for i in 0..BLADES {
            for k in 0..BLADES {
                let a = self.m[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..BLADES {
                    out.m[i][j] += a * other.m[k][j];
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    pub fn nonzero_count(&self) -> usize {
        self.m.iter().flatten().filter(|c| **c != 0.0).count()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, c| a.max(c.abs()))
    }
}

impl Add for LinearMap {
    type Output = LinearMap;
    fn add(mut self, rhs: LinearMap) -> LinearMap {
        for (r, s) in self.m.iter_mut().zip(rhs.m) {
            for (a, b) in r.iter_mut().zip(s) {
                *a += b;
            }
        }
        self
    }
}

impl Sub for LinearMap {
    type Output = LinearMap;
    fn sub(self, rhs: LinearMap) -> LinearMap {
        self + rhs.scaled(-1.0)
    }
}

impl Neg for LinearMap {
    type Output = LinearMap;
    fn neg(self) -> LinearMap {
        self.scaled(-1.0)
    }
}

impl Mul for LinearMap {
    type Output = LinearMap;
    fn mul(self, rhs: LinearMap) -> LinearMap {
        self.compose(&rhs)
    }
}
