use thiserror::Error;

/// Errors fall into three families with distinct handling at the CLI
/// boundary: bad input (exit 1), a resource guard tripping (exit 3) and
/// internal contract violations that indicate a pipeline bug.
#[derive(Debug, Error)]
pub enum DspError {
    #[error("dimension {d} out of range (1..={max})")]
    DimensionOutOfRange { d: u32, max: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, DspError>;

impl DspError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        DspError::InvalidInput(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        DspError::ResourceLimit(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        DspError::Contract(msg.into())
    }
}
