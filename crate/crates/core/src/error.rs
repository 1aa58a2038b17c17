use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported shape pair: {0}")]
    UnsupportedPair(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("instance of size {n} exceeds the exact-solver cap of {cap}")]
    SizeCapExceeded { n: usize, cap: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Short machine-readable tag used in CSV reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::UnsupportedPair(_) => "UnsupportedPair",
            Error::InvalidShape(_) => "InvalidShape",
            Error::SizeCapExceeded { .. } => "SizeCapExceeded",
            Error::InvalidParams(_) => "InvalidParams",
            Error::ConstructionFailed(_) => "ConstructionFailed",
            Error::Format(_) => "Format",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
