use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run. Each maps to a stable process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("grid mismatch: {0}")]
    Grid(String),

    #[error("{}: row {row}: {msg}", path.display())]
    Malformed {
        path: PathBuf,
        row: usize,
        msg: String,
    },

    #[error("verification failed: {0}")]
    Verify(String),

    #[error(transparent)]
    Library(#[from] etorus::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use etorus::Error as E;
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Grid(_) => 4,
            CliError::Malformed { .. } => 5,
            CliError::Library(e) => match e {
                E::GridMismatch { .. } | E::DimensionMismatch { .. } => 4,
                E::InvariantViolation(_) => 1,
                E::InvalidType { .. }
                | E::InvalidLevel(_)
                | E::InvalidRootIndex { .. }
                | E::SizeLimit { .. }
                | E::MemoryCap { .. } => 2,
            },
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
