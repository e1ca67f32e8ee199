use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An enumeration would produce more items than the caller allowed.
    #[error("budget exceeded: {count} items requested, budget is {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },

    #[error("ground set mismatch: {left} vs {right}")]
    GroundMismatch { left: usize, right: usize },

    #[error("invalid ground set size {0} (must satisfy 1 <= n <= 64)")]
    InvalidGround(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("empty family where a nonempty one is required")]
    EmptyFamily,

    #[error("parse error: {0}")]
    Parse(String),

    /// A signed intermediate that must be nonnegative went below zero.
    #[error("arithmetic underflow in {0}")]
    Underflow(&'static str),

    /// An identity that must hold exactly did not (implementation bug).
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("search space too large: {0}")]
    SearchTooLarge(String),

    #[error("no t-cover exists for this family")]
    NoCover,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
