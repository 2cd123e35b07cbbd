use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpsError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {msg}", path.display())]
    Parse { path: PathBuf, msg: String },
    #[error(transparent)]
    Numeric(#[from] hankel_core::Error),
}

pub type OpsResult<T> = Result<T, OpsError>;

impl OpsError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        OpsError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, msg: impl ToString) -> Self {
        OpsError::Parse {
            path: path.into(),
            msg: msg.to_string(),
        }
    }

    /// Process exit code: 2 for bad configuration or parameters, 3 for
    /// unreadable or unwritable files.
    pub fn exit_code(&self) -> u8 {
        match self {
            OpsError::Config(_) | OpsError::Numeric(_) => 2,
            OpsError::Io { .. } | OpsError::Parse { .. } => 3,
        }
    }
}
