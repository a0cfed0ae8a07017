//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Bit-string lengths disagree where equal lengths are required.
    LengthMismatch {
        expected: usize,
        actual: usize,
    },
    /// An operation would materialize a vector over `2^n_bits` entries
    /// beyond its supported capacity.
    Capacity {
        n_bits: usize,
        max: usize,
    },
    /// A precondition on an argument was violated.
    InvalidArgument(String),
    /// The operation is not defined for this sketch kind.
    Unsupported(String),
    /// An operation that needs at least one element got none.
    Empty(&'static str),
    Io(String),
    Json(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::Capacity { n_bits, max } => {
                write!(f, "n_bits = {n_bits} exceeds supported maximum {max}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported operation: {msg}"),
            Error::Empty(what) => write!(f, "{what} is empty"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
            Error::Json(msg) => write!(f, "json error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
