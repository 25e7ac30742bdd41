use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    #[error("deficit not resolved: {0}")]
    DeficitNotResolved(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short variant name, used in CLI messages and error records.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ConstraintViolated(_) => "ConstraintViolated",
            Error::DomainError(_) => "DomainError",
            Error::UnsupportedDomain(_) => "UnsupportedDomain",
            Error::ToleranceNotMet(_) => "ToleranceNotMet",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::NoConvergence(_) => "NoConvergence",
            Error::InsufficientRange(_) => "InsufficientRange",
            Error::DeficitNotResolved(_) => "DeficitNotResolved",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
