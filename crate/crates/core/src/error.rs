//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("degenerate fiber at x = {x}: fiber length {len}")]
    DegenerateFiber { x: f64, len: f64 },

    #[error("degenerate triangle {index}: area {area}")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("unknown boundary tag: {0}")]
    UnknownTag(String),

    #[error("no interior nodes remain after applying Dirichlet conditions")]
    EmptyInterior,

    #[error("shifted operator is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("eigenvalue iteration did not converge within {0} iterations")]
    MaxIterations(usize),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand used by validation code.
pub fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
