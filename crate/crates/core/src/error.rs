use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cache parse error at line {line}: {message}")]
    CacheParse { line: usize, message: String },

    #[error("cache gap at line {line}: expected n = {expected}, found n = {found}")]
    CacheGap {
        line: usize,
        expected: u64,
        found: u64,
    },

    /// The convergent series never settled within a quarter of an integer.
    #[error("certification failed for n = {n} after {terms} terms at {bits} bits (gap {gap})")]
    Certification {
        n: u64,
        terms: u64,
        bits: usize,
        gap: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
