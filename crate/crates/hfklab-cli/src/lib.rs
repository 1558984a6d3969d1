//! Library surface of the command-line tool, shared with its test
//! suites.
//!
//! Exit code conventions: 0 all checks passed, 1 a check failed, 2 bad
//! input, 3 an internal invariant was violated.

pub mod commands;
pub mod data;
pub mod inputs;
pub mod reportfmt;
pub mod sweep;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn input(message: String) -> Self {
        Self { code: EXIT_INPUT, message }
    }

    pub fn internal(message: String) -> Self {
        Self { code: EXIT_INTERNAL, message }
    }

    pub fn from_input(e: impl std::fmt::Display) -> Self {
        Self::input(e.to_string())
    }

    pub fn from_internal(e: impl std::fmt::Display) -> Self {
        Self::internal(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
