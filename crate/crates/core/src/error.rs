use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order r = {0}: must be at least 2")]
    InvalidOrder(i64),

    #[error("root selector m = {m} out of range 1..={max}")]
    SelectorOutOfRange { m: i64, max: i64 },

    #[error("q = -1 (m = r = {0})")]
    QIsMinusOne(i64),

    #[error("q^2 is not a primitive root of unity of degree {r} for m = {m} (its order is {order})")]
    NotPrimitive { r: i64, m: i64, order: i64 },

    #[error("precision {0} is below the minimum of 50 decimal digits")]
    PrecisionTooLow(u32),

    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("colour {colour} outside 0..={max}")]
    ColourOutOfRange { colour: u32, max: u32 },

    #[error("inadmissible triple ({0}, {1}, {2})")]
    Inadmissible(u32, u32, u32),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("system order mismatch: {0} vs {1}")]
    SystemOrderMismatch(u32, u32),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("negative radicand {0} in square root")]
    NegativeRadicand(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid triangulation: {0}")]
    Triangulation(String),

    #[error("enumeration budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("coefficient {index} of the product polynomial is not a rational integer")]
    NonIntegralCoefficient { index: usize },

    #[error("no root within tolerance for m = {m} (value {value})")]
    NoRootMatch { m: i64, value: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
