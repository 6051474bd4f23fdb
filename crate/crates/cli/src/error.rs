use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Validation(String),
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: spinprobe::Error,
    },
    #[error(transparent)]
    Core(#[from] spinprobe::Error),
    #[error("oracle mismatch: {missed} missed, {spurious} spurious")]
    OracleMismatch { missed: usize, spurious: usize },
}

impl CliError {
    /// 1 for I/O, 2 for invalid input, 3 for a strict oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Core(spinprobe::Error::Io(_)) => 1,
            CliError::Input {
                source: spinprobe::Error::Io(_),
                ..
            } => 1,
            CliError::OracleMismatch { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
