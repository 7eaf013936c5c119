use thiserror::Error;

/// Errors raised by the library. Variants map onto the failure classes the
/// CLI reports (usage, precondition, numerical, generation).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Shapes, dimensions or values outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hypothesis of an inequality is not met by the supplied instance.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An eigen or singular value solver did not converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Invalid request from a caller (empty campaign, unknown variant).
    #[error("usage error: {0}")]
    Usage(String),

    /// The instance generator could not satisfy a hypothesis within its retry budget.
    #[error("generation error: {0}")]
    Generation(String),

    /// Exact integer arithmetic overflowed its representation.
    #[error("range error: {0}")]
    Range(String),

    /// `|sin(omega * m)|` fell inside the guard band, so the closed form kernel is unusable.
    #[error("singular kernel: |sin(omega*m)| = {sin_abs:e} <= guard {guard:e} (omega = {omega}, m = {m})")]
    SingularKernel {
        omega: f64,
        m: usize,
        sin_abs: f64,
        guard: f64,
    },

    /// Malformed interchange record.
    #[error("invalid matrix record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
