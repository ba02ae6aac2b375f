//! Experiment driver for the dissipative Dicke Mpemba study: JSON configs
//! in, versioned CSV and JSON out, with embedded invariant checks.

pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use checks::{Check, Reference, Report};
pub use config::{Experiment, ExperimentConfig, RunConfig, TimeGrid};
pub use error::{CliError, CliResult};
pub use experiments::run;
pub use output::{Artifacts, Table};
