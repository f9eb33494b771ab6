use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("evaluation point has a zero coordinate")]
    ZeroCoordinate,

    #[error("the zero polynomial has no support")]
    ZeroPolynomial,

    #[error("symbol fails the necessary convergence conditions (a(1,1) = 4, zero on E')")]
    InvalidScheme,

    #[error("validity window exhausted: {0}")]
    WindowExhausted(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

pub(crate) fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}
