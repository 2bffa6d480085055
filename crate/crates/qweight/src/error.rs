//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operator or vector dimensions do not match the declared subsystem shape.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A dimension or enumeration cap was exceeded.
    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    /// An input failed a mathematical precondition (hermiticity, positivity, purity, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Text input could not be parsed; `position` is a byte offset into the input.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// Two stabilizer generators anticommute.
    #[error("generators {a} and {b} anticommute")]
    Anticommuting { a: String, b: String },

    /// The generated group contains -I and is therefore not a stabilizer group.
    #[error("-I is in the generated group")]
    MinusIdentity,

    /// The generator list is linearly dependent.
    #[error("dependent generators: group closure has {actual} elements, expected {expected}")]
    DependentGenerators { expected: usize, actual: usize },

    /// An eigensolver or other numerical routine failed to produce a usable result.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A caller-supplied argument is out of range or inconsistent.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Operation requires qubits (local dimension 2).
    #[error("unsupported local dimension {0}: operation is qubit-only")]
    UnsupportedDimension(usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn size_cap(msg: impl Into<String>) -> Self {
        Error::SizeCap(msg.into())
    }

    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
