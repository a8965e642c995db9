use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {dim} outside supported range 1..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },

    #[error("non-finite amplitude at index {index}")]
    NonFinite { index: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator entries have length {len}, expected {dim}x{dim}")]
    BadOperatorShape { dim: usize, len: usize },

    #[error("invalid projector decomposition `{label}`: {reason}")]
    InvalidDecomposition { label: String, reason: String },

    #[error("zero selection probability: post-selection cannot follow this measurement")]
    ZeroSelectionProbability,

    #[error("orthogonal selection: weak value undefined")]
    OrthogonalSelection,

    #[error("invalid pointer parameter: {0}")]
    InvalidPointer(String),

    #[error("grid too narrow: half width {half_width} < required {required}")]
    GridTooNarrow { half_width: f64, required: f64 },

    #[error("grid too coarse: spacing {spacing} exceeds sigma/4 = {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("assignment has no value for setting {0}")]
    MissingSetting(String),

    #[error("universe of {size} settings exceeds enumeration cap of {max}")]
    UniverseTooLarge { size: usize, max: usize },

    #[error("unknown scenario `{0}` (expected ghz, three-box or ifm)")]
    UnknownScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
