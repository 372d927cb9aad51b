use thiserror::Error;

/// Domain errors raised by the library. Variant names double as the
/// diagnostic tags printed by the command-line front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),
    #[error("polynomial is not a square")]
    NotASquare,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial is x")]
    IsX,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("constant term must be 1")]
    NonUnitConstantTerm,
    #[error("polynomial has no roots")]
    NoRoots,
    #[error("index must be odd")]
    EvenIndex,
    #[error("input must be odd")]
    EvenInput,
    #[error("index must be positive")]
    NonPositiveIndex,
    #[error("division is not exact")]
    NonExactDivision,
    #[error("degree {0} out of range")]
    DegreeOutOfRange(u32),
    #[error("field degree {0} exceeds the supported maximum")]
    FieldTooLarge(u32),
    #[error("zero has no multiplicative order or inverse")]
    ZeroElement,
    #[error("extension degrees are incompatible")]
    IncompatibleDegrees,
    #[error("field elements come from different fields")]
    FieldMismatch,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("integer overflow")]
    Overflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph is not a forest")]
    NotAForest,
    #[error("bad edge: {0}")]
    BadEdge(String),
    #[error("cycle needs at least 3 vertices")]
    CycleTooSmall,
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("malformed pattern: {0}")]
    MalformedPattern(String),
    #[error("orbit is not periodic with the requested period")]
    NotPeriodic,
    #[error("i/o error: {0}")]
    IoError(String),
    #[error("cache schema or version mismatch: {0}")]
    SchemaVersionMismatch(String),
    #[error("structural check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::MalformedPolynomial(_) => "MalformedPolynomial",
            Error::NotASquare => "NotASquare",
            Error::NotIrreducible => "NotIrreducible",
            Error::IsX => "IsX",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::NonUnitConstantTerm => "NonUnitConstantTerm",
            Error::NoRoots => "NoRoots",
            Error::EvenIndex => "EvenIndex",
            Error::EvenInput => "EvenInput",
            Error::NonPositiveIndex => "NonPositiveIndex",
            Error::NonExactDivision => "NonExactDivision",
            Error::DegreeOutOfRange(_) => "DegreeOutOfRange",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::ZeroElement => "ZeroElement",
            Error::IncompatibleDegrees => "IncompatibleDegrees",
            Error::FieldMismatch => "FieldMismatch",
            Error::TooLarge(_) => "TooLarge",
            Error::Overflow => "Overflow",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NotAForest => "NotAForest",
            Error::BadEdge(_) => "BadEdge",
            Error::CycleTooSmall => "CycleTooSmall",
            Error::BadVertex(_) => "BadVertex",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::MalformedGraph(_) => "MalformedGraph",
            Error::MalformedPattern(_) => "MalformedPattern",
            Error::NotPeriodic => "NotPeriodic",
            Error::IoError(_) => "IoError",
            Error::SchemaVersionMismatch(_) => "SchemaVersionMismatch",
            Error::Inconsistent(_) => "Inconsistent",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoError(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
