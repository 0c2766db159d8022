use std::path::PathBuf;

/// Process exit codes, stable for scripting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Validation = 2,
    ToleranceExceeded = 3,
    Hopeless = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: parse error at line {line}, column {column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Core(#[from] gal_core::Error),
    #[error("tolerance exceeded: {0}")]
    ToleranceExceeded(String),
    #[error("hopeless instance: {0}")]
    Hopeless(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl LabError {
    pub fn validation(field: impl Into<String>, message: impl ToString) -> Self {
        Self::Validation {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_status(&self) -> ExitStatus {
        match self {
            LabError::Io { .. } | LabError::Output(_) => ExitStatus::Failure,
            LabError::Parse { .. } | LabError::Validation { .. } => ExitStatus::Validation,
            LabError::Core(gal_core::Error::HopelessInstance) => ExitStatus::Hopeless,
            LabError::Core(gal_core::Error::NormDrift { .. }) => ExitStatus::ToleranceExceeded,
            LabError::Core(_) => ExitStatus::Validation,
            LabError::ToleranceExceeded(_) => ExitStatus::ToleranceExceeded,
            LabError::Hopeless(_) => ExitStatus::Hopeless,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
