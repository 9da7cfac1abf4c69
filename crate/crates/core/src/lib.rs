//! Spacetime algebra Cl(1,3) and a set of numerical checks built on it:
//! field-to-spinor inversion, Fierz and Crawford identities, discrete
//! exterior calculus on Minkowski lattices, and Maxwell-Dirac residuals.

pub mod algebra;
pub mod complexified;
pub mod equivalence;
pub mod error;
pub mod fields;
pub mod inversion;
pub mod report;

pub use algebra::{EvenMultivector, Grade, LinearMap, Multivector};
pub use error::{Error, ParseError, Result};
