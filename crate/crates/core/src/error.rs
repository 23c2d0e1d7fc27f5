use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: String },

    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),

    #[error("tuple is empty")]
    EmptyTuple,

    #[error("moment vector is empty")]
    EmptyVector,

    #[error("enumeration of {size} items exceeds the oracle limit {limit}")]
    TooLarge { size: String, limit: u64 },

    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(String),

    #[error("not completely monotone: signed difference of order {order} at offset {offset} is {value}")]
    NotCompletelyMonotone { order: usize, offset: usize, value: String },

    #[error("solver stopped after {iterations} iterations with residual {residual}")]
    NoConvergence { iterations: usize, residual: String },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DuplicateIndex(_) => "DuplicateIndex",
            Error::EmptyTuple => "EmptyTuple",
            Error::EmptyVector => "EmptyVector",
            Error::TooLarge { .. } => "TooLarge",
            Error::OutOfRange(_) => "OutOfRange",
            Error::NotCompletelyMonotone { .. } => "NotCompletelyMonotone",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BadParams(_) => "BadParams",
            Error::Parse(_) => "Parse",
        }
    }
}
