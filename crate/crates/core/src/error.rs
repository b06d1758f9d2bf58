use thiserror::Error;

use crate::supergeometry::PhaseSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient mismatch: element of {left} combined with element of {right}")]
    AmbientMismatch { left: PhaseSpace, right: PhaseSpace },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("wrong degree: expected {expected}, found {found}")]
    WrongDegree { expected: String, found: String },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not skew-symmetric: {0}")]
    NotSkew(String),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("no instance found: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { context: context.into(), message: message.into() }
    }
}
