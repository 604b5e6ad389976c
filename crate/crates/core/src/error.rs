use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCapExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("boundary violation: v({profile:?}) = {value}, expected {expected}")]
    BoundaryViolation { profile: Vec<u32>, value: u32, expected: u32 },

    #[error("monotonicity violation: {lower:?} <= {upper:?} but v = {lower_value} > {upper_value}")]
    MonotonicityViolation { lower: Vec<u32>, upper: Vec<u32>, lower_value: u32, upper_value: u32 },

    #[error("value {value} at table index {index} is outside K = 0..{k}")]
    ValueOutOfRange { index: usize, value: u32, k: u32 },

    #[error("table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("veto threshold must not be the zero profile")]
    ZeroVeto,

    #[error("veto set is empty after removing zero profiles")]
    EmptyAfterValidation,

    #[error("weighted representation: {0}")]
    Weighted(String),

    #[error("invalid TU game: {0}")]
    InvalidTuGame(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("average-convexity precondition not met: the two average games differ")]
    PreconditionNotMet,

    #[error("monotonicity spot check failed: {0}")]
    MonotonicitySpotCheckFailed(String),

    #[error("invalid interval game: {0}")]
    InvalidIntervalGame(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl GameError {
    /// True for errors that mean "the input object is not a valid game".
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            GameError::BoundaryViolation { .. }
                | GameError::MonotonicityViolation { .. }
                | GameError::ValueOutOfRange { .. }
                | GameError::TableLength { .. }
                | GameError::InvalidProfile(_)
                | GameError::ShapeMismatch(_)
                | GameError::ZeroVeto
                | GameError::EmptyAfterValidation
                | GameError::Weighted(_)
                | GameError::InvalidTuGame(_)
                | GameError::InvalidShape(_)
                | GameError::MonotonicitySpotCheckFailed(_)
                | GameError::InvalidIntervalGame(_)
        )
    }
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;
