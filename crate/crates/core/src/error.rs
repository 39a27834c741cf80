use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    ModulusDegree { expected: u32, got: usize },
    #[error("modulus coefficient {0} is out of range for the prime")]
    ModulusDigit(u32),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("field of order {p}^{n} is too large for this representation")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coordinate vector has wrong length or out-of-range entries")]
    BadCoordinates,
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("width {width} is smaller than the {needed} digits required")]
    WidthTooSmall { width: usize, needed: usize },
    #[error("digit {digit} is out of range for base {p}")]
    BadDigit { digit: u64, p: u64 },
    #[error("integer overflow")]
    Overflow,
    #[error("invalid prime power: {0}")]
    InvalidPrimePower(String),
    #[error("series is not a unit (constant term is zero)")]
    NotUnit,
    #[error("inner series must have zero constant term")]
    NonzeroConstant,
    #[error("series has no linear term and cannot be reverted")]
    NotRevertible,
    #[error("series is not in the image of the logarithmic derivative: {0}")]
    NotInImage(String),
    #[error("{0} must be coprime to p")]
    NotCoprime(u64),
    #[error("quadruple is not p-admissible")]
    NotAdmissible,
    #[error("characteristic mismatch: expected {expected}, field has {got}")]
    Characteristic { expected: u64, got: u64 },
    #[error("{0}")]
    Internal(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
