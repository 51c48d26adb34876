use thiserror::Error;

/// Errors raised by the simulator, circuit builders and scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported qubit count {0} (expected 1..={max})", max = crate::state::MAX_QUBITS)]
    Size(usize),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: {left} vs {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code used by the command line runner: 2 for anything caused
    /// by bad input, 3 for failures inside the simulator.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
