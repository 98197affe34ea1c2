use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible modulo p")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument is not a unit")]
    NotAUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("operands live in different coefficient domains")]
    DomainMismatch,
    #[error("inner series of a composition must have zero constant term")]
    ComposeNonzeroConstant,
    #[error("constant term is not a unit")]
    ConstantTermNotUnit,
    #[error("series is zero to its truncation order")]
    ZeroSeries,
    #[error("point is singular modulo p")]
    SingularPoint,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("function has a pole (or zero denominator) on the disc")]
    PoleOnDisc,
    #[error("function vanishes identically on the curve")]
    ZeroFunction,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("column {0} of the divisor matrix is zero")]
    ZeroColumn(usize),
    #[error("curve equation is reducible over the residue field")]
    ReducibleH,
    #[error("a partial derivative of h vanishes on the curve")]
    DegenerateDerivatives,
    #[error("exponent vector is zero")]
    ZeroVector,
    #[error("dlog combination for class {0:?} vanishes identically on the curve")]
    NonradicalSystem(Vec<u64>),
    #[error("functions are multiplicatively dependent modulo constants: {0}")]
    DependentFunctions(String),
    #[error("no function value is a unit at p after theta-routing")]
    NonUnitValue,
    #[error("point does not have good reduction at p")]
    BadReduction,
    #[error("series vanishes to its truncation order")]
    VanishesToTruncation,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}
