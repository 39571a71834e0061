use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("oracle check failed: {0}")]
    OracleFailed(String),

    #[error("cannot write {path}: {source}", path = .path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] pspin_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pspin_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::OracleFailed(_) => 4,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::Domain { .. } | E::InvalidPotential(_) => 2,
                E::MissingWell(..)
                | E::NoTransition
                | E::BelowTransition { .. }
                | E::NotMetastable(_)
                | E::AboveBarrier { .. }
                | E::BelowWell { .. } => 3,
                E::Oracle(_) => 4,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
