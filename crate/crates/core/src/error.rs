use thiserror::Error;

/// Errors raised when building or querying families.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("degree list is empty")]
    EmptyDegrees,
    #[error("weights must be positive, got {0}")]
    NonPositiveWeight(i64),
    #[error("degrees must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("at least two weights are required, got {0}")]
    TooFewWeights(usize),
    #[error("codimension {codim} exceeds ambient dimension {dim}")]
    CodimTooLarge { codim: usize, dim: usize },
    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { got: usize, max: usize },
    #[error("variable index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("variable subset must be nonempty")]
    EmptySubset,
    #[error("invalid cyclic quotient data: {0}")]
    InvalidQuotient(String),
    #[error("epsilon must satisfy 0 < epsilon <= 1, got {0}")]
    InvalidEpsilon(String),
    #[error("volume lower bound must be positive, got {0}")]
    InvalidVolumeBound(String),
    #[error("bound hypotheses not met: {0}")]
    BoundHypothesis(String),
    #[error("invalid search parameters: {0}")]
    InvalidSearch(String),
    #[error("k must be odd and positive, got {0}")]
    EvenTemplateParameter(u64),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
