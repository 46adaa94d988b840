use thiserror::Error;

/// Errors raised by the geometric kernels, coordinate machinery and file format.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a formula (non-positive length, NaN, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested polygon or configuration does not exist in the hyperbolic plane.
    #[error("geometrically infeasible: {0}")]
    Infeasible(String),

    /// A word evaluated to an elliptic or parabolic element, so it has no translation length.
    #[error("non-hyperbolic element (|trace| = {trace})")]
    NonHyperbolic { trace: f64 },

    /// Wrong number of boundary lengths for the requested X-piece kind.
    #[error("expected {expected} boundary lengths, got {got}")]
    Arity { expected: usize, got: usize },

    /// A curve index does not name an interior curve of the pants decomposition.
    #[error("curve {0} is not an interior curve of this decomposition")]
    InvalidIndex(i64),

    /// Two vectors were compared that do not share the same base structure.
    #[error("vectors are defined over different base structures")]
    IncompatibleBase,

    /// The operation requires a property of the base structure that does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The operation is not supported for this configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed word or pants data.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Structured-text parse failure with the offending field path and location.
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {value}")))
    }
}
