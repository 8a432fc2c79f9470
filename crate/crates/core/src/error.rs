use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("map is not well defined: {0}")]
    WellDefinednessFailure(String),

    #[error("invalid window: {0}")]
    WindowError(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("ring error: {0}")]
    RingError(String),

    #[error("psi does not commute with beta at index {index}")]
    CommutationFailure { index: i64 },

    #[error("precondition failed: {0}")]
    PreconditionFailure(String),

    #[error("component cap error: {0}")]
    CapError(String),

    #[error("bad fixture parameters: {0}")]
    ParamError(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("property {item} violated at index {index}: {detail}")]
    PropertyViolation {
        item: String,
        index: i64,
        detail: String,
    },

    #[error("elements live in different rings: {0}")]
    RingMismatch(String),

    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ParseError {
            location: location.into(),
            message: message.into(),
        }
    }
}
