//! Command-line surface for the gpelab solver: configuration parsing,
//! subcommands and CSV output.

pub mod commands;
pub mod config;

use thiserror::Error;

/// Command failures, partitioned by exit code: configuration problems
/// exit 2, numerical failures exit 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}
