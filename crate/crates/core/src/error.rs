use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. `lambda <= -1`,
    /// a non-unit torus element, a point outside the ball).
    #[error("domain error: {0}")]
    Domain(String),

    /// The point lies on the measure-zero set excluded from the group-moment
    /// coordinate chart (some `z_j = 0`).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The requested integral does not converge.
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// Symbol text could not be parsed.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// Symbol uses variables not available for the requested case.
    #[error("arity error: {0}")]
    Arity(String),

    /// Symbol evaluation hit a domain error (log of a negative, division by zero, ...).
    #[error("evaluation error at byte {pos}: {msg}")]
    Eval { pos: usize, msg: String },

    /// Sampled values of a symbol exceeded its declared bound.
    #[error("bound violation: {0}")]
    Bound(String),

    /// Invalid quadrature configuration.
    #[error("quadrature error: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
