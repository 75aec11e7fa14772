use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("index subsets do not match: {0}")]
    SubsetShapeMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("monomial of degree {degree} exceeds basis degree {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("bundle is partial (computed up to r = {computed} of {required})")]
    PartialBundle { computed: usize, required: usize },

    #[error("expected a tuple of length {expected}, got {actual}")]
    WrongTupleLength { expected: usize, actual: usize },

    #[error("word references matrix index {index} but tuple has length {len}")]
    BadWordIndex { index: usize, len: usize },

    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::SubsetShapeMismatch(_) => "SubsetShapeMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::DegreeOverflow { .. } => "DegreeOverflow",
            Error::SingularMatrix => "SingularS",
            Error::NotMonic => "NotMonic",
            Error::PartialBundle { .. } => "PartialBundle",
            Error::WrongTupleLength { .. } => "WrongTupleLength",
            Error::BadWordIndex { .. } => "BadWordIndex",
            Error::InvalidPrime(_) => "InvalidPrime",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
