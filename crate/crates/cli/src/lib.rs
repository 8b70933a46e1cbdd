//! Library backing the `vevlab` command-line driver: verification suites,
//! Compton sweeps, potential tables, and single-point amplitude evaluation,
//! with CSV/JSON table rendering.

pub mod commands;
pub mod config;
pub mod format;
pub mod verify;

/// Process outcome: exit code 0 on success, 1 on verification failure,
/// 2 on usage or input errors.
#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments, config, or kinematics input (exit 2).
    Usage(String),
    /// A verification check exceeded its tolerance (exit 1).
    Verification(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Verification(msg) => write!(f, "verification failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}
