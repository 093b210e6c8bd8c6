use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range: {reason}")]
    Index { index: i64, reason: String },

    #[error("invalid packet: {0}")]
    InvalidPacket(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("coefficient range captures norm {captured:.8}, deficit {deficit:.3e} exceeds tolerance")]
    InsufficientRange { captured: f64, deficit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn index_error(index: i64, reason: impl Into<String>) -> Error {
    Error::Index {
        index,
        reason: reason.into(),
    }
}
