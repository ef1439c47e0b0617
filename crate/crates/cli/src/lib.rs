//! Command-line front end for the link simulator: configuration loading,
//! presets, parallel execution, and CSV report emission.

pub mod config;
pub mod driver;
pub mod report;

/// Top-level errors, split by exit code: configuration problems exit
/// with 2, runtime problems with 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}
