use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected width {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("object sets differ: {0}")]
    ObjectMismatch(String),

    #[error("object map: {0}")]
    InvalidMap(String),

    #[error("not a closure system: {0}")]
    InvalidClosureSystem(String),

    #[error("more than {cap} concepts; enumeration stopped (raise the cap to continue)")]
    Intractable { cap: usize },

    #[error("cxt line {line}: {message}")]
    Cxt { line: usize, message: String },

    #[error("csv row {row}, column '{column}': {message}")]
    Csv {
        row: usize,
        column: String,
        message: String,
    },

    #[error("scaling spec: {0}")]
    ScalingSpec(String),

    #[error("factorization: {0}")]
    Factorization(String),

    #[error("highlighted set {0} is not an extent of the lattice")]
    NotAnExtent(String),

    #[error("scale-measures are over different base contexts")]
    BaseMismatch,

    #[error("(σ, S) is not a scale-measure of K: preimage of attribute '{witness}' is not closed")]
    NotAScaleMeasure { witness: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}
