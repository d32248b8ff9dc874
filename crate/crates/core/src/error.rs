use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("moment diverges: {0}")]
    Divergent(&'static str),

    #[error("degenerate law: {0}")]
    DegenerateLaw(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty degree sample")]
    EmptySample,

    #[error("line {line}: {message}")]
    BadRow { line: u64, message: String },

    #[error("root finding failed to bracket a zero of {0} although its condition holds")]
    NonBracketing(&'static str),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
