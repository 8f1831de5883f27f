use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level mismatch: {left} vs {right}; lift both operands to a common level first")]
    LevelMismatch { left: u64, right: u64 },

    #[error("cannot lift from level {from} to level {to}: {from} does not divide {to}")]
    NotDivisible { from: u64, to: u64 },

    #[error("{a} is not coprime to the level {level}, so it does not define an automorphism")]
    NotCoprime { a: i64, level: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("bound m = {m} is not equal to {p}^{alpha}")]
    BoundMismatch { m: u64, p: u64, alpha: u32 },

    #[error("the p-adic valuation of zero is +infinity and has no integer value")]
    ZeroValuation,

    #[error("value is identically zero: m = {m} <= d = {d}, the summation domain is empty")]
    IdenticallyZero { m: u64, d: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("certificate does not match index: {0}")]
    StructuralMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}
