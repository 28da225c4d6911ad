use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {constraint}")]
    Config { field: String, constraint: String },

    #[error("cannot write `{}`: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read `{}`: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Compute(#[from] phasemix_core::Error),

    #[error("{failed} of {total} sweep runs failed")]
    SweepPartial { failed: usize, total: usize },
}

impl CliError {
    pub fn config(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            constraint: constraint.into(),
        }
    }

    /// Process exit status for this failure category.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Input { .. } | CliError::Output { .. } => 3,
            CliError::Compute(_) => 4,
            CliError::SweepPartial { .. } => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
