use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus {0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("fields differ: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("entry {value} is not reduced modulo {modulus}")]
    OutOfRange { value: u64, modulus: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("invalid sparse matrix: {0}")]
    BadSparse(String),
    #[error("dimension {dim} exceeds the materialization cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("malformed TDM1 data: {0}")]
    Format(String),
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
