use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (self-loop, dead node, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested quantity has no value on this input.
    #[error("undefined value: {0}")]
    Undefined(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degree sequence is not graphical: {0}")]
    NotGraphical(String),

    #[error("not enough candidate pairs: requested {requested}, available {available}")]
    Capacity { requested: usize, available: usize },

    #[error("trace grids do not align: {0}")]
    GridMismatch(String),

    #[error("{path}: line {line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("schema error in {}: {reason}", path.display())]
    Schema { path: PathBuf, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
