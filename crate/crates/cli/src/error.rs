use thiserror::Error;

/// Everything that maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid config field `{field}`: {message}")]
    Invalid { field: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("unknown sweep parameter {0:?} (expected c_n, c_s, c_o, h-scale or ubar-scale)")]
    UnknownParam(String),

    #[error("empty or malformed range {0:?} (expected a:b:steps with steps >= 1)")]
    EmptyRange(String),

    #[error("{0}")]
    Core(#[from] neurosyn::Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Exit code contract.
pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
