pub mod commands;
pub mod error;
pub mod format;
pub mod sweep;

pub use error::{ExitStatus, LabError, Result};
