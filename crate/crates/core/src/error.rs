use thiserror::Error;

/// Errors raised by the algebraic operations and the JSON codecs.
///
/// Failed verification checks are not errors: they come back as reports
/// carrying witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("algebra of dimension {dim} exceeds the configured limit {limit}")]
    ResourceLimit { dim: usize, limit: usize },

    #[error("spans live in different algebras")]
    AmbientMismatch,

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("cocycle identity fails: {0}")]
    CocycleFailure(String),

    #[error("truncation {trunc} too small: {detail}")]
    TruncationTooSmall { trunc: u32, detail: String },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("local data disagree on rho: chart 0 has {chart0}, chart 1 has {chart1}")]
    RhoMismatch { chart0: String, chart1: String },

    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
