use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moment order ({j}, {k}) not supported: both orders must be at most {max}")]
    OrderTooHigh { j: usize, k: usize, max: usize },

    #[error("required cutoff exceeds the configured maximum of {max}")]
    CutoffExplosion { max: usize },

    #[error("state has zero norm: {0}")]
    ZeroNorm(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("nonphysical moments: {0}")]
    NonphysicalMoments(String),

    #[error("calibration failure: {0}")]
    Calibration(String),

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
