use std::path::PathBuf;

/// Failures of the command-line driver, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] scarmps_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Failed(String),
}

pub type Result<T> = std::result::Result<T, ToolError>;

impl ToolError {
    pub fn usage(message: impl Into<String>) -> Self {
        ToolError::Usage(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ToolError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 verification failure, 2 usage, 3 numerical or I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            ToolError::Failed(_) => 1,
            ToolError::Usage(_) => 2,
            ToolError::Numerical(_) | ToolError::Io { .. } | ToolError::Format { .. } => 3,
        }
    }
}

/// Parameter errors raised while validating input are usage errors.
pub(crate) fn as_usage(err: scarmps_core::Error) -> ToolError {
    ToolError::Usage(err.to_string())
}
