use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("matrix is rank deficient")]
    RankDeficient,

    #[error("generator matrix is not left prime")]
    NotLeftPrime,

    #[error("code has no parity-check matrix")]
    NoParityCheck,

    #[error("code is not delay-free")]
    NotDelayFree,

    #[error("enumeration exceeds budget: {0}")]
    TooLarge(String),

    #[error("error weight {w} exceeds redundancy {max}")]
    WeightTooLarge { w: usize, max: usize },

    #[error("input must be positive: {0}")]
    NonPositiveInput(String),

    #[error("vector is not a codeword")]
    NotInCode,

    #[error("inconsistent error specification: {0}")]
    InconsistentSpec(String),

    #[error("q = {0} is not a prime power >= 2")]
    NotPrimePower(u64),

    #[error("field size q = {0} is not supported (limit 2^16)")]
    FieldTooLarge(u64),

    #[error("invalid data: {0}")]
    BadData(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
