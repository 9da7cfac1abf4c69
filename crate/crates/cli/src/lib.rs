//! Batch front end: JSON configs in, JSON reports and CSV traces out.

pub mod config;
pub mod output;
pub mod run;

pub use config::{load_config, parse_config, Command, FieldConfig, RunConfig};
pub use output::{write_atomic, write_report, Report, ResidualEntry};
pub use run::run_command;
