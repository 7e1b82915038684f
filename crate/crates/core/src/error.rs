use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("absolute value of zero is undefined here")]
    ZeroArgument,
    #[error("p = {0} is not supported (p must be an odd prime)")]
    UnsupportedPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("delta = {0} defines a split algebra, not a field")]
    SplitAlgebra(String),
    #[error("invalid extension data: {0}")]
    InvalidExtension(String),
    #[error("different generator has the wrong valuation: {0}")]
    InvalidDifferent(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("conductor {s} is smaller than the required level {n}")]
    ConductorTooSmall { n: u32, s: u32 },
    #[error("generator is not invertible modulo p^m: {0}")]
    NonInvertibleGenerator(String),
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),
    #[error("cell refinement did not terminate at depth {0}")]
    NonterminatingCell(u32),
    #[error("degenerate column in Iwasawa decomposition")]
    DegenerateColumn,
    #[error("row vector is not primitive: {0}")]
    NotPrimitive(String),
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroArgument => "ZeroArgument",
            Error::UnsupportedPrime(_) => "UnsupportedPrime",
            Error::NotPrime(_) => "NotPrime",
            Error::SplitAlgebra(_) => "SplitAlgebra",
            Error::InvalidExtension(_) => "InvalidExtension",
            Error::InvalidDifferent(_) => "InvalidDifferent",
            Error::SingularMatrix => "SingularMatrix",
            Error::ConductorTooSmall { .. } => "ConductorTooSmall",
            Error::NonInvertibleGenerator(_) => "NonInvertibleGenerator",
            Error::CapacityExceeded(_) => "CapacityExceeded",
            Error::NonterminatingCell(_) => "NonterminatingCell",
            Error::DegenerateColumn => "DegenerateColumn",
            Error::NotPrimitive(_) => "NotPrimitive",
            Error::InvalidLevel(_) => "InvalidLevel",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
