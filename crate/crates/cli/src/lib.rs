//! Library side of the `startail` binary: report types, output
//! rendering, the verification suites and the command dispatcher. The
//! binary itself is a thin wrapper so integration tests can drive
//! everything in-process.

pub mod app;
pub mod checks;
pub mod output;
pub mod reports;

/// Exit codes are a stable contract: 0 success, 1 check failure,
/// 2 usage or validation error.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or arguments outside an operation's domain.
    Usage(String),
    /// A verification suite found a violated property.
    CheckFailure(String),
    /// I/O trouble writing results.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::CheckFailure(_) => 1,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::CheckFailure(m) | CliError::Io(m) => m,
        }
    }
}

impl From<startail_core::Error> for CliError {
    fn from(err: startail_core::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
