//! Library side of the `rotnd` tool: argument handling, trial-based
//! verification against the copying oracle, benchmarking and tensor file
//! generation.

pub mod bench;
pub mod cli;
pub mod gen;
pub mod verify;

use rotnd_core::format::FormatError;
use rotnd_core::TensorError;
use thiserror::Error;

/// Failure of a subcommand, carrying its process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unparsable or mismatched input.
    #[error("{0}")]
    Invalid(String),
    /// A verification trial disagreed with the oracle.
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Mismatch(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
