use std::process::ExitCode;

use serde_json::Value;

/// Failures mapped onto the exit-code contract: 2 for invalid input, 3 when
/// no solution, certificate or crossing exists.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    /// The report is still written; it carries the evidence.
    NoSolution { message: String, report: Value },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn from_input(e: hamriccati::Error) -> Self {
        Self::Input(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Input(_) => ExitCode::from(2),
            Self::NoSolution { .. } => ExitCode::from(3),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Input(m) => write!(f, "invalid input: {m}"),
            Self::NoSolution { message, .. } => write!(f, "{message}"),
        }
    }
}
