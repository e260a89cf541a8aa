//! Batch front end: loads JSON datasets, runs one experiment per invocation and
//! writes a deterministic JSON or CSV report.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod report;

pub use config::{Command, ExperimentConfig, OutputFormat};
pub use dataset::{Dataset, Loaded};
pub use report::{Report, Table};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Core(String),
}

impl CliError {
    /// Process exit code: 2 for configuration and usage problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.to_string())
            }
        }
    )*};
}

core_error!(
    lptwist_core::analysis::AnalysisError,
    lptwist_core::algebra::AlgebraError,
    lptwist_core::cohomology::CohomologyError,
    lptwist_core::structures::StructureError,
    lptwist_core::weyl::WeylError
);
