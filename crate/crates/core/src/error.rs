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

    #[error("unknown label {label}{}", at_line(*.line))]
    UnknownLabel { label: String, line: Option<usize> },

    #[error("malformed record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("duplicate id {0}")]
    DuplicateId(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite feature value at example {example}, index {index}")]
    NonFinite { example: usize, index: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("id mismatch: {0}")]
    IdMismatch(String),

    #[error("pipeline is not fitted")]
    NotFitted,

    /// A referenced resource (lexicon, embedding table, dictionary) is
    /// missing, unreadable or malformed.
    #[error("resource {path}: {message}")]
    Resource { path: PathBuf, message: String },

    #[error("checksum mismatch for {path}: model expects {expected}, file has {found}")]
    Checksum {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("model file, section [{section}]: {message}")]
    Model { section: String, message: String },

    #[error("config: {0}")]
    Config(String),
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn resource(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Resource {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn model(section: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Model {
            section: section.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 1 usage, 2 data, 3 resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::NotFitted => 1,
            Error::Resource { .. } | Error::Checksum { .. } => 3,
            _ => 2,
        }
    }
}
