use std::io;
use std::process::ExitCode;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("missing required value `{0}` (pass the flag or set it in the scenario file)")]
    Missing(&'static str),

    #[error("{0}")]
    Scenario(String),

    #[error(transparent)]
    Invalid(#[from] qsiege::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Missing(_) => "usage",
            CliError::Scenario(_) => "scenario",
            CliError::Invalid(_) => "validation",
            CliError::Io { .. } => "io",
        }
    }

    /// Argument and validation problems exit with 2, failures while writing
    /// results with 1.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::io("writing CSV", e.into())
    }
}
