use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank requires a field; use SNF")]
    RequiresField,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (must be a prime below 2^31)")]
    ModulusOutOfRange(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("index sets overlap")]
    Overlap,
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("Pfaffian undefined for odd size")]
    OddPfaffian,
    #[error("inhomogeneous entry in d_{j} at ({row}, {col})")]
    Inhomogeneous { j: i32, row: usize, col: usize },
    #[error("inhomogeneous polynomial: {0}")]
    InhomogeneousPolynomial(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("target homology slice has dimension {0}, expected 1")]
    TargetNotOneDimensional(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
