use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operation requires dimension {expected}, field has dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("shift {0} is not a multiple of the grid spacing")]
    NonLatticeShift(f64),

    #[error("dense size bound exceeded: {0}")]
    SizeBound(String),

    #[error("not an admissible Beltrami coefficient: {0}")]
    NotBeltrami(String),

    #[error("ratio undefined: denominator vanishes but numerator is {numerator:e}")]
    DegenerateRatio { numerator: f64 },

    #[error("exp(log derivative) disagrees with the principal solution (relative error {0:e})")]
    Consistency(f64),

    #[error("malformed field dump: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
