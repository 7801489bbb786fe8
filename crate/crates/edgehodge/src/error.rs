use edgehodge_core::{CochainError, FibreError, RadialError, SpectrumError, StratifiedError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config: {0}")]
    Config(String),
    #[error("model: {0}")]
    Model(String),
    #[error("io: {0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numerics: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            Error::Model(_) => 3,
            Error::Verification(_) | Error::Numeric(_) => 4,
        }
    }
}

impl From<StratifiedError> for Error {
    fn from(e: StratifiedError) -> Self {
        match e {
            StratifiedError::UnknownSpace(_) => Error::Config(e.to_string()),
            _ => Error::Model(e.to_string()),
        }
    }
}

impl From<CochainError> for Error {
    fn from(e: CochainError) -> Self {
        Error::Model(e.to_string())
    }
}

impl From<SpectrumError> for Error {
    fn from(e: SpectrumError) -> Self {
        Error::Model(e.to_string())
    }
}

impl From<FibreError> for Error {
    fn from(e: FibreError) -> Self {
        match e {
            FibreError::DegenerateSize(_) | FibreError::BadLength | FibreError::Degree { .. } | FibreError::Count { .. } => {
                Error::Config(e.to_string())
            }
            _ => Error::Numeric(e.to_string()),
        }
    }
}

impl From<RadialError> for Error {
    fn from(e: RadialError) -> Self {
        match e {
            RadialError::BadGrid(_) | RadialError::BadBasepoint(_) => Error::Config(e.to_string()),
            _ => Error::Numeric(e.to_string()),
        }
    }
}
