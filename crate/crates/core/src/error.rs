use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("AIRS index {l} outside 1..={irs_count}")]
    IndexOutOfRange { l: usize, irs_count: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("geometry has {found} hops, expected {expected}")]
    HopCount { expected: usize, found: usize },

    #[error("beamformer target vector is zero")]
    ZeroVector,

    #[error("phase configuration covers {found} IRSs, expected {expected}")]
    PhaseCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
