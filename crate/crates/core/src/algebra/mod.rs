//! Dense real Clifford algebra Cl(1,3) with signature (+, −, −, −).

pub mod blade;
mod even;
mod exp;
mod linear;
mod multivector;

pub use even::{invert_even, invert_even_with, EvenMultivector, INVERT_EPS};
pub use exp::{exp_bivector, exp_series};
pub use linear::LinearMap;
pub use multivector::{Grade, Multivector};

pub fn geometric_product(a: &Multivector, b: &Multivector) -> Multivector {
    a.geometric(b)
}

pub fn exterior_product(a: &Multivector, b: &Multivector) -> Multivector {
    a.wedge(b)
}

pub fn scalar_product(a: &Multivector, b: &Multivector) -> f64 {
    a.scalar_product(b)
}

pub fn left_contract(a: &Multivector, b: &Multivector) -> Multivector {
    a.left_contract(b)
}

pub fn right_contract(a: &Multivector, b: &Multivector) -> Multivector {
    a.right_contract(b)
}

pub fn reverse(a: &Multivector) -> Multivector {
    a.reverse()
}

pub fn grade_project(a: &Multivector, k: Grade) -> Multivector {
    a.grade_project(k)
}

pub fn hodge_star(a: &Multivector) -> Multivector {
    a.hodge_star()
}
