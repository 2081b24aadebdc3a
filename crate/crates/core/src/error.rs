use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("box size must be positive, got {0}")]
    NonPositiveSize(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("internal diagnostic: {0}")]
    Diagnostic(String),
}

impl From<std::io::Error> for CoreError {
    fn from(e: std::io::Error) -> Self {
        CoreError::Io(e.to_string())
    }
}
