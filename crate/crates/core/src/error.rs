use thiserror::Error;

/// Failures raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("operator annihilates the state: {0}")]
    AnnihilatedState(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("system size {requested} exceeds the cap of {cap} sites")]
    SizeCap { requested: usize, cap: usize },
    #[error("too few samples in fit window: need {needed}, found {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("time grids are not aligned: {0}")]
    Alignment(String),
    #[error("invalid time series: {0}")]
    InvalidSeries(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
