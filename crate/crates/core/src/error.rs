use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive search would exceed its configured work limit.
    #[error("resource limit exceeded: {what} (budget {budget})")]
    Budget { what: String, budget: u64 },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("cache {path} does not match request: {msg}")]
    CacheMismatch { path: PathBuf, msg: String },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
