use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter {0} is not unimodular")]
    ParameterNotUnimodular(String),
    #[error("Z is not unitary")]
    ZNotUnitary,
    #[error("{0} is not in J(p, m)")]
    SNotInJpm(String),
    #[error("the Fourier transform vanishes at 0")]
    NonzeroAtZeroViolation,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
