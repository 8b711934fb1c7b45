use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("dimension mismatch in `{field}`: expected {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: usize,
    },

    #[error("invariant violated for `{field}`: {reason}")]
    InvariantViolation { field: String, reason: String },

    #[error("point outside the domain: {0}")]
    DomainError(String),

    #[error("starting point is not in the domain")]
    InfeasibleStart,

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error(
        "integrand does not decay: value at {at} is within the truncation drop of the maximum"
    )]
    NonDecayingTail { at: f64 },

    #[error("adaptive quadrature exceeded maximum depth {0}")]
    DepthExceeded(usize),

    #[error(
        "grid too small: integrand has not decayed at the grid boundary (drop {drop:.3} nats)"
    )]
    GridTooSmall { drop: f64 },

    #[error("instance too large for exact enumeration (n + m = {0} > 12)")]
    TooLarge(usize),

    #[error("grid-search optimum lies on the search box boundary; enlarge the box")]
    OptimumOnBoundary,
}

impl Error {
    pub(crate) fn invariant(field: &str, reason: impl Into<String>) -> Self {
        Error::InvariantViolation {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn dims(field: &str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            field: field.to_string(),
            expected,
            found,
        }
    }
}
