//! Bitmask blade tables for Cl(1,3).
//!
//! Blade `b` is the ascending product of the upper-index generators `γ^μ`
//! whose bit `μ` is set. The metric is η = diag(1, −1, −1, −1).

pub const BLADES: usize = 16;

pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Bitmask of the volume element γ^0γ^1γ^2γ^3.
pub const VOLUME: usize = 0b1111;

pub const fn grade_of(b: usize) -> u32 {
    (b as u32).count_ones()
}

/// Sign of `blade(a) * blade(b)`; the product blade is `a ^ b`.
pub const fn product_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut i = 0;
    while i < 4 {
        if (b >> i) & 1 == 1 {
            swaps += ((a >> (i + 1)) as u32).count_ones();
        }
        i += 1;
    }
    let mut sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    let common = a & b;
    let mut mu = 0;
    while mu < 4 {
        if (common >> mu) & 1 == 1 {
            sign *= METRIC[mu];
        }
        mu += 1;
    }
    sign
}

pub const fn reverse_sign(b: usize) -> f64 {
    let k = grade_of(b);
    if (k * k.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub const fn involution_sign(b: usize) -> f64 {
    if grade_of(b) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

const fn build_signs() -> [[f64; BLADES]; BLADES] {
    let mut t = [[0.0; BLADES]; BLADES];
    let mut a = 0;
    while a < BLADES {
        let mut b = 0;
        while b < BLADES {
            t[a][b] = product_sign(a, b);
            b += 1;
        }
        a += 1;
    }
    t
}

pub const SIGNS: [[f64; BLADES]; BLADES] = build_signs();

/// Which blade pairs survive a given product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    Geometric,
    Wedge,
    LeftContraction,
    RightContraction,
}

impl ProductKind {
    #[inline]
    pub const fn keeps(self, a: usize, b: usize) -> bool {
        match self {
            ProductKind::Geometric => true,
            ProductKind::Wedge => a & b == 0,
            ProductKind::LeftContraction => a & !b == 0,
            ProductKind::RightContraction => b & !a == 0,
        }
    }
}

/// Blade mask of the product γ^{i1}γ^{i2}… with distinct indices, and the
/// sign that brings it to ascending order.
pub fn ordered_blade(indices: &[usize]) -> Option<(usize, f64)> {
    let mut mask = 0usize;
    let mut sign = 1.0;
    for &i in indices {
        if i > 3 || mask & (1 << i) != 0 {
            return None;
        }
        sign *= product_sign(mask, 1 << i);
        mask |= 1 << i;
    }
    Some((mask, sign))
}
