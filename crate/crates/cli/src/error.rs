use hybrid_core::Error as CoreError;
use thiserror::Error;

/// Exit codes: 0 ok, 2 configuration, 3 physics precondition, 4 instability,
/// 5 truncation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unstable: {0}")]
    Instability(String),

    #[error("truncation failure: {0}")]
    Truncation(String),
}

impl CliError {
    pub fn config(line: usize, message: impl Into<String>) -> Self {
        CliError::Config { line: Some(line), message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Config { line: None, message: message.into() }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Config { line, .. } => *line,
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Precondition(_) => 3,
            CliError::Instability(_) => 4,
            CliError::Truncation(_) => 5,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::UnknownScenario { .. } | CoreError::UnknownParameter { .. } => CliError::usage(msg),
            CoreError::NoSteadyState { .. } | CoreError::StepUnderflow { .. } | CoreError::Singular(_) => {
                CliError::Instability(msg)
            }
            CoreError::Truncation { .. } => CliError::Truncation(msg),
            _ => CliError::Precondition(msg),
        }
    }
}
