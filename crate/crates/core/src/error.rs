//! Error type shared across the library.

/// Errors produced by numerical operations in this crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear solve detected numerical rank deficiency.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// Two sequences that must agree in length did not.
    #[error("length mismatch in {context}: expected {expected}, got {got}")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// Input is degenerate for the requested computation (e.g. all-zero signal).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A text record or config file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Writing one of the output files failed.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
