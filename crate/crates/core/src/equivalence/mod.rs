//! Maxwell-Dirac equivalence pipelines and the Seiberg-Witten system.

pub mod canonical;
pub mod mde1;
pub mod mde2;
pub mod sw;

pub use canonical::{canonical_decompose, CanonicalForm};
pub use mde1::{dh_residual, mde1_diagnostics, mde1_diagnostics_masked, mde1_report, spinorial_maxwell_residual, Mde1Diagnostics};
pub use mde2::{mde2_build, mde2_residual, Mde2Inputs};
pub use sw::{sw_residuals, weyl_gauge_check, SwState};
