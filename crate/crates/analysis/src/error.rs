use shearlet_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A warped support or a test function does not fit the represented frequency window.
    #[error("coverage: {0}")]
    Coverage(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for AnalysisError {
    fn from(e: std::io::Error) -> Self {
        AnalysisError::Io(e.to_string())
    }
}

impl AnalysisError {
    /// True for numerical diagnostics, false for rejected input.
    pub fn is_diagnostic(&self) -> bool {
        match self {
            AnalysisError::Core(CoreError::WindowTooSmall(_) | CoreError::Diagnostic(_)) => true,
            AnalysisError::Core(_) | AnalysisError::InvalidParameter(_) | AnalysisError::Io(_) => false,
            AnalysisError::Coverage(_) | AnalysisError::Diagnostic(_) | AnalysisError::NonConvergence(_) => true,
        }
    }
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
