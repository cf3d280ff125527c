use thiserror::Error;

/// Failures reported by the library.
///
/// [`Error::is_input_error`] separates malformed input from violated
/// mathematical preconditions; the command-line front end maps the two
/// groups onto different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not full-dimensional")]
    NotFullDimensional,
    #[error("origin not interior")]
    OriginNotInterior,
    #[error("polar not integral")]
    PolarNotIntegral,
    #[error("not reflexive")]
    NotReflexive,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("infeasible")]
    Infeasible,
    #[error("point outside support: {0:?}")]
    PointOutsideSupport(Vec<i64>),
    #[error("heights not generic: {0}")]
    HeightsNotGeneric(String),
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan is not complete")]
    NotComplete,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("rays do not span")]
    RaysDoNotSpan,
    #[error("ray outside polar polytope: {0:?}")]
    RayOutsidePolar(Vec<i64>),
    #[error("unbounded sections polytope")]
    Unbounded,
    #[error("ray choice violates theorem hypothesis: {0}")]
    HypothesisViolated(String),
    #[error("duplicate points")]
    DuplicatePoints,
    #[error("lifted configuration does not span")]
    RankDeficient,
    #[error("configuration too large: {points} points exceeds bound {bound}")]
    ConfigurationTooLarge { points: usize, bound: usize },
    #[error("origin not in configuration")]
    OriginMissing,
    #[error("non-generic heights")]
    NonGenericHeights,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("too many vertices for canonical form: {0}")]
    TooManyVertices(usize),
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidFan(_)
                | Error::DuplicatePoints
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
