use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A word letter was zero or referenced a generator outside the presentation.
    #[error("malformed word: letter {letter} with {ngens} generators")]
    MalformedWord { letter: i32, ngens: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Operation undefined for the given value (zero inverse, singular matrix, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation guard tripped; `partial` carries whatever layer data was finished.
    #[error("resource limit exceeded: {reason}")]
    Resource { reason: String, partial: Vec<usize> },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
