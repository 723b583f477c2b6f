use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("working precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("exact coordinates exceeded the size budget before convergence ({0} bits)")]
    CoordinateBlowup(u64),
    #[error("curve is singular (discriminant is zero)")]
    SingularCurve,
    #[error("ramified place unsupported: p = {p} divides conductor m = {m}")]
    RamifiedUnsupported { p: u64, m: u32 },
    #[error("reduction lands on the singular point; smooth locus only")]
    BadReductionUnsupported,
    #[error("operation requires {expected} reduction, found {found}")]
    WrongReductionType { expected: String, found: String },
    #[error("base field too small: {0}")]
    FieldTooSmall(String),
    #[error("prime {0} is inert or ramified in the CM field")]
    InertOrRamifiedPrime(u64),
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("duplicate points in input")]
    DuplicatePoints,
    #[error("orbit is empty or too small")]
    InsufficientOrbit,
    #[error("input point is torsion")]
    TorsionInput,
    #[error("torsion test inconclusive at maximal precision")]
    Inconclusive,
    #[error("no admissible prime below limit {0}")]
    NoAdmissiblePrime(u64),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("division by zero in field arithmetic")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
