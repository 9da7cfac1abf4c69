#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use stakit::{EvenMultivector, Grade, Multivector};

pub fn random_mv(rng: &mut impl Rng) -> Multivector {
    Multivector::from_coeffs(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

pub fn random_even(rng: &mut impl Rng) -> EvenMultivector {
    EvenMultivector::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

pub fn random_bivector(rng: &mut impl Rng) -> Multivector {
    random_mv(rng).grade_project(Grade::BIVECTOR)
}

pub fn mv() -> impl Strategy<Value = Multivector> {
    prop::array::uniform16(-4.0..4.0f64).prop_map(Multivector::from_coeffs)
}

pub fn graded(k: u8) -> impl Strategy<Value = Multivector> {
    mv().prop_map(move |m| m.grade_project(Grade::new(k).unwrap()))
}

pub fn even() -> impl Strategy<Value = EvenMultivector> {
    prop::array::uniform8(-2.0..2.0f64).prop_map(EvenMultivector::from_array)
}

/// Bivector with |F²| bounded away from zero relative to ‖F‖².
pub fn non_null_bivector() -> impl Strategy<Value = Multivector> {
    graded(2).prop_filter("null or tiny", |f| {
        let z = (*f * *f).to_complex().norm();
        z > 1e-2 * f.norm_sq() && f.norm() > 1e-3
    })
}

pub fn rel(a: &Multivector, b: &Multivector) -> f64 {
    (*a - *b).norm() / a.norm().max(b.norm()).max(1.0)
}
