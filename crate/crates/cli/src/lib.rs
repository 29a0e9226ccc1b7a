//! Experiment runner behind the `kernelbench` binary.

pub mod config;
pub mod run;
pub mod svg;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("dataset missing: {0}")]
    DatasetMissing(String),
    #[error("dataset {0}: {1}")]
    Dataset(String, kernelbench_core::Error),
    #[error(transparent)]
    Compute(#[from] kernelbench_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            CliError::ConfigInvalid(_) => 2,
            CliError::DatasetMissing(_) | CliError::Dataset(..) => 3,
            CliError::Io(_) => 4,
        }
    }
}

pub(crate) fn io_err(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
