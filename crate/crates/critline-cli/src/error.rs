use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

/// Exit status of a run that completed but missed a tolerance.
pub const EXIT_TOLERANCE: i32 = 2;
/// Exit status for bad input: flags, config files, output paths.
pub const EXIT_CONFIG: i32 = 3;
/// Exit status for numerical failures inside the library.
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },

    #[error("{failed} of {total} checks outside tolerance")]
    ChecksFailed { failed: usize, total: usize, failures: Vec<serde_json::Value> },

    #[error(transparent)]
    Library(#[from] critline::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::ChecksFailed { .. } => "tolerance",
            CliError::Library(e) if e.is_input_error() => "config",
            CliError::Library(critline::Error::Tolerance { .. }) => "tolerance",
            CliError::Library(_) => "numeric",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "tolerance" => EXIT_TOLERANCE,
            "numeric" => EXIT_NUMERIC,
            _ => EXIT_CONFIG,
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        let mut rec = json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Library(critline::Error::Evaluation { t, .. }) = self {
            rec["t"] = json!(t);
        }
        if let CliError::ChecksFailed { failures, .. } = self {
            rec["failures"] = json!(failures);
        }
        rec.to_string()
    }
}
