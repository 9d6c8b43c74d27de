use thiserror::Error;

/// Errors raised by graph construction and the analyses built on top of it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("degree {k} out of range (top dimension {top})")]
    Degree { k: usize, top: usize },

    #[error("index {index} is not a simplex of dimension {dim}")]
    Index { index: usize, dim: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("graphs are not comparable: {0}")]
    Incomparable(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("matrix is singular (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("function is not injective on vertices")]
    NotInjective,

    #[error("capacity exceeded: {what} ({size} > {limit})")]
    Capacity { what: &'static str, size: usize, limit: usize },

    #[error("unsolvable: right-hand side has kernel component of norm {kernel_norm:.3e}")]
    Unsolvable { kernel_norm: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("integration failed at t = {t}: {reason}; retry with a smaller step size")]
    Integration { t: f64, reason: String },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
