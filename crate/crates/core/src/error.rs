use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. `code()` gives the stable
/// machine-readable name used in CLI error records.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("interpolation constraints do not span the ambient affine hull")]
    Underdetermined,
    #[error("interpolation constraints conflict: {0}")]
    Inconsistent(String),
    #[error("solved linear part is not integral: {0}")]
    NonIntegral(String),
    #[error("zero-length edges at fiber point: {}", .0.join(", "))]
    ZeroLengthEdge(Vec<String>),
    #[error("structure map value leaves its target polytope: {0}")]
    ImageEscape(String),
    #[error("basepoint mismatch: {0}")]
    BasepointMismatch(String),
    #[error("map does not send the new base into the old base: {0}")]
    NotContained(String),
    #[error("not an extension of the curve's tropical structure: {0}")]
    NotAnExtension(String),
    #[error("face P_u ∩ {{rho_e = 0}} is empty")]
    EmptyFace,
    #[error("contracting {} creates a new cycle", .0.join(", "))]
    NewCycle(Vec<String>),
    #[error("every point of the face has zero length on {}", .0.join(", "))]
    NoInteriorWitness(Vec<String>),
    #[error("inconsistent chain data: {0}")]
    InconsistentChain(String),
    #[error("invalid curve type: {0}")]
    InvalidCurve(String),
    #[error("invalid degree-one map: {0}")]
    InvalidDegreeOne(String),
    #[error("unknown identifier: {0}")]
    UnknownId(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::Underdetermined => "UNDERDETERMINED",
            Error::Inconsistent(_) => "INCONSISTENT",
            Error::NonIntegral(_) => "NON_INTEGRAL",
            Error::ZeroLengthEdge(_) => "ZERO_LENGTH_EDGE",
            Error::ImageEscape(_) => "IMAGE_ESCAPE",
            Error::BasepointMismatch(_) => "BASEPOINT_MISMATCH",
            Error::NotContained(_) => "NOT_CONTAINED",
            Error::NotAnExtension(_) => "NOT_AN_EXTENSION",
            Error::EmptyFace => "EMPTY_FACE",
            Error::NewCycle(_) => "NEW_CYCLE",
            Error::NoInteriorWitness(_) => "NO_INTERIOR_WITNESS",
            Error::InconsistentChain(_) => "INCONSISTENT_CHAIN",
            Error::InvalidCurve(_) => "INVALID_CURVE",
            Error::InvalidDegreeOne(_) => "INVALID_DEGREE_ONE",
            Error::UnknownId(_) => "UNKNOWN_ID",
            Error::Internal(_) => "INTERNAL",
            Error::Parse(_) => "PARSE",
        }
    }
}

pub fn dims(what: &str, expected: usize, got: usize) -> Error {
    Error::DimensionMismatch(format!("{what}: expected {expected}, got {got}"))
}
