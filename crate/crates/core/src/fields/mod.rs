//! Multivector fields on Minkowski coordinates and discrete calculus on them.

pub mod diffop;
pub mod expr;
pub mod field;
pub mod hertz;
pub mod lattice;
pub mod maxwell;

pub use diffop::{dalembertian, dirac_derivative, partials, DiffOp, DiracParts};
pub use expr::{parse_field_expr, FieldExpr, Func};
pub use field::{check_grade, padded, resolve_domain, MultivectorField};
pub use lattice::{Grid, LatticeSpec};
pub use maxwell::{component_maxwell, generalized_maxwell_residual, ComponentDivergence};
pub use hertz::{hertz_pipeline, hertz_residuals, HertzBundle};
