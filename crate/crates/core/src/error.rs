use thiserror::Error;

/// Errors surfaced by the library. Invalid domains are reported eagerly;
/// no operation silently produces an empty or meaningless interval.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("logarithm of an interval not strictly positive")]
    LogNonPositive,

    #[error("square root of an interval with negative lower bound")]
    SqrtNegative,

    #[error("invalid digit system: {0}")]
    InvalidSystem(String),

    #[error("operation requires uniform weights on the digit set")]
    NonUniformWeights,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("enumeration guard exceeded: b^N = {size} > {limit}")]
    EnumerationGuard { size: u128, limit: u128 },

    #[error("no base up to {limit} satisfies the requested threshold")]
    NoBaseFound { limit: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
