use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("invalid generator name {0:?}")]
    ParseGenerator(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("bad index ordering: {0}")]
    BadOrdering(String),

    #[error("invalid degree d = {d}: need d >= {min}")]
    InvalidDegree { d: usize, min: usize },

    #[error("general position violated by {{{}}}", .0.join(", "))]
    GeneralPosition(Vec<String>),

    #[error("degenerate form triple {{{}}}", .0.join(", "))]
    DegenerateTriple(Vec<String>),

    #[error("chart (X/Z, Y/Z) undefined at vertex {0}")]
    ChartFailure(String),

    #[error("exceptional markers do not cancel: {0}")]
    MarkerMismatch(String),

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("path meets a singularity: {0}")]
    Singularity(String),

    #[error("degenerate membrane: {0}")]
    DegenerateMembrane(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parameter t must be nonzero")]
    ZeroParameter,

    #[error("bad t sequence: {0}")]
    BadSequence(String),

    #[error("sequence does not converge: {0}")]
    NonConvergent(String),

    #[error("limit constant L must be nonzero")]
    ZeroLimit,

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
