//! Error type shared by all modules.

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by construction, validation, and training.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("instance has no coordinates")]
    EmptyInstance,
    #[error("non-finite value in numeric input")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bag must contain at least one instance")]
    EmptyBag,
    #[error("item set must contain at least one item")]
    EmptyItemSet,
    #[error("sample is empty")]
    EmptySample,
    #[error("binary label must be -1 or +1, got {0}")]
    InvalidBinaryLabel(i8),
    #[error("class label {label} out of range 1..={k}")]
    LabelOutOfRange { label: usize, k: usize },
    #[error("need at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("target index {index} out of range for {len} items")]
    TargetIndexOutOfRange { index: usize, len: usize },
    #[error("weight norm {norm} exceeds cap {cap}")]
    NormCapExceeded { norm: f64, cap: f64 },
    #[error("weights have {weights_k} classes but example has {example_k}")]
    ClassCountMismatch { weights_k: usize, example_k: usize },
    #[error("weight dimension {dim} is not divisible by class count {k}")]
    DimensionNotDivisible { dim: usize, k: usize },
    #[error("one-class training requires all labels -1; found +1 at example {0}")]
    PositiveLabelInOneClass(usize),
    #[error("hypothesis grid is empty")]
    EmptyGrid,
    #[error("hypothesis set is empty")]
    EmptyHypothesisSet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
