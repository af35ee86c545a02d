use thiserror::Error;

/// Errors produced by the walk engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands with incompatible dimensions or step indices.
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    /// An argument outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// An invalid request, such as too few quadrature points.
    #[error("usage error: {0}")]
    Usage(&'static str),
    /// A numerical invariant was violated.
    #[error("numeric error: {0}")]
    Numeric(&'static str),
    /// The requested work exceeds a configured limit.
    #[error("resource limit: {what} ({requested} > {limit})")]
    Resource {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
