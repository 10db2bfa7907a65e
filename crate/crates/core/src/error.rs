use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: wrong arity, rank out of range, non-dominant weight, ...
    #[error("usage error: {0}")]
    Usage(String),

    #[error("{0} is not in the span of the roots")]
    Span(String),

    #[error("{0} is not in the positive root cone")]
    Cone(String),

    /// The vector lies on a wall; the caller has to perturb it.
    #[error("{0} is a singular vector")]
    Singular(String),

    #[error("unsupported torus: {0}")]
    UnsupportedTorus(String),

    #[error("truncation order too small: {0}")]
    Truncation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by the caller's input rather than by a failed invariant.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::Span(_) | Error::Cone(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
