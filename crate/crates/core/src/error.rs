use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point or radius outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("quadrature did not converge: last two values {last} and {previous}")]
    Quadrature { last: f64, previous: f64 },

    #[error("non-finite value {value} at z = {point}")]
    Evaluation { point: Complex64, value: f64 },

    /// No sign change was found where a root was required.
    #[error("no root: {0}")]
    NoRoot(String),

    #[error("degenerate bound: {0}")]
    DegenerateBound(String),

    #[error("unsupported comparison: {0}")]
    UnsupportedComparison(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("no univalence radius: {0}")]
    NoUnivalenceRadius(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
