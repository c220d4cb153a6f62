//! Error type shared across the solver library.

use thiserror::Error;

/// Errors produced by expression evaluation, problem loading and the solver loops.
#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation left the mathematical domain of an operation (sqrt of a
    /// negative number, division by zero, ...).
    #[error("domain violation: {0}")]
    Domain(String),

    /// A value became NaN or infinite where a finite number is required.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Vector lengths do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Bisection of a zero-width subregion was requested.
    #[error("degenerate box")]
    DegenerateBox,

    /// An operation that needs a nonempty set received an empty one.
    #[error("empty set: {0}")]
    EmptySet(&'static str),

    /// Text-format parse failure with source position.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A problem definition violates its invariants.
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// A solver or mini-MOEA configuration violates its invariants.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A resource guard refused the request (oracle grids, box budgets).
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    /// An objective vector is missing the preimage required by the operation.
    #[error("missing preimage for objective vector")]
    MissingPreimage,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
