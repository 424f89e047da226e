use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const VERIFICATION: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Field { field: String, message: String },

    #[error(transparent)]
    Solver(#[from] fracoga::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} sweep cell(s) failed")]
    SweepFailed { failed: usize, code: i32 },
}

impl CliError {
    pub fn field(field: &str, message: impl ToString) -> Self {
        CliError::Field {
            field: field.to_string(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) if e.is_numerical() => exit::NUMERICAL,
            CliError::SweepFailed { code, .. } => *code,
            _ => exit::VALIDATION,
        }
    }
}
