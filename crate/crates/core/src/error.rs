use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// An instance violates the knapsack standing hypothesis (every item fits
    /// alone, no constraint is slack).
    #[error("knapsack hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("instance too small to split: {size} < {min}")]
    TooSmallToSplit { size: usize, min: usize },

    #[error("instance of size {size} exceeds the exact solver limit of {limit}")]
    ExactLimit { size: usize, limit: usize },

    #[error("tours do not partition the vertex set: {0}")]
    BadPartition(String),

    /// Failure inside one node of the divide-and-conquer tree. `path` is a
    /// string of `L`/`R` steps from the root.
    #[error("subproblem {path}: {source}")]
    Subproblem {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error("generator gave up after {attempts} attempts: {reason}")]
    RetriesExhausted { attempts: u32, reason: String },

    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },

    #[error("line {line}: expected {expected} values, found {found}")]
    CountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: value out of range: {msg}")]
    OutOfRange { line: usize, msg: String },

    #[error("line {line}: cannot parse {token:?}")]
    Parse { line: usize, token: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid experiment spec: {0}")]
    Spec(String),

    #[error("{path}: {source}")]
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

    /// Prefix a subproblem path step onto an error coming out of a child.
    pub(crate) fn in_child(self, step: char) -> Self {
        match self {
            Error::Subproblem { path, source } => Error::Subproblem {
                path: format!("{step}{path}"),
                source,
            },
            other => Error::Subproblem {
                path: step.to_string(),
                source: Box::new(other),
            },
        }
    }
}
