//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by the operators in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Division by a truncated series whose constant term vanishes,
    /// or an expression hit a pole on the evaluation path.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Expression syntax error with a byte offset into the source text.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier that is neither a variable nor a known function.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Geometry query that cannot be answered (empty set, unbounded
    /// enumeration, exhausted stages, ...).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// An internal invariant that is guaranteed by theory failed numerically.
    #[error("internal invariant failure: {0}")]
    InternalInvariant(String),

    /// Malformed configuration or serialized input.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
