use shearlet_analysis::AnalysisError;
use shearlet_core::CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or configuration; exit code 2.
    Validation(String),
    /// A numerical check could not be carried out as requested; exit code 3.
    Diagnostic(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Diagnostic(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Diagnostic(m) => write!(f, "diagnostic: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::WindowTooSmall(_) | CoreError::Diagnostic(_) => CliError::Diagnostic(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Core(c) => c.into(),
            AnalysisError::InvalidParameter(_) | AnalysisError::Io(_) => CliError::Validation(e.to_string()),
            AnalysisError::Coverage(_) | AnalysisError::Diagnostic(_) | AnalysisError::NonConvergence(_) => {
                CliError::Diagnostic(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io: {e}"))
    }
}
