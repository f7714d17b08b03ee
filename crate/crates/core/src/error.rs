use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: {kind} id {id} out of range (limit {limit})")]
    Bounds {
        line: usize,
        kind: &'static str,
        id: u64,
        limit: usize,
    },

    #[error("line {line}: invalid feature value {value}")]
    Value { line: usize, value: String },

    #[error("document {doc}: empty allowed label set")]
    EmptyAllowed { doc: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("model format: {0}")]
    Model(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage/configuration, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Bounds { .. }
            | Error::Value { .. }
            | Error::Dimension(_)
            | Error::Model(_) => 2,
            Error::EmptyAllowed { .. } => 3,
        }
    }
}
