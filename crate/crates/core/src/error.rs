use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("message is all zeros")]
    ZeroMessage,
    #[error("bit length {0} is odd")]
    OddLength(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("long-shadow string is not the image of any bit string")]
    Inconsistent,
    #[error("only {available} primes below the bound, {needed} required")]
    InsufficientPrimes { needed: usize, available: usize },
    #[error("value is not invertible modulo M")]
    NotInvertible,
    #[error("supplied factors do not multiply to M - 1")]
    BadFactorization,
    #[error("factorization of M - 1 is unknown")]
    UnknownFactorization,
    #[error("search exhausted after {attempts} attempts")]
    SearchExhausted { attempts: u64 },
    #[error("private parameters do not match the public parameters: {0}")]
    InconsistentParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("instance with n = {n} exceeds the cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
