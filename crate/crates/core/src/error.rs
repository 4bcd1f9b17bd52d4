use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },

    #[error("an ideal needs at least one generator")]
    EmptyGenerators,

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} exceeds the supported limit {limit}")]
    PrimeTooLarge { p: u64, limit: u64 },

    #[error("{q} is not a power of {p}")]
    NotPowerOfP { q: u64, p: u64 },

    #[error("expected a nonnegative rational, got {0}")]
    Negative(String),

    #[error("value {value} lies outside {range}")]
    OutOfRange { value: String, range: &'static str },

    #[error("truncation of zero is undefined for e >= 1")]
    TruncOfZero,

    #[error("the unit ideal has no exponent matrix")]
    UnitIdeal,

    #[error("the monomial with exponent {0} lies in the ideal; use reduction")]
    MonomialInIdeal(String),

    #[error("work budget of {0} states exceeded")]
    BudgetExceeded(u64),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("cross-check against the oracle failed: {0}")]
    CrossCheck(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
