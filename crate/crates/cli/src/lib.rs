//! Library side of the `neurosyn` command-line tool: config parsing and
//! the subcommand bodies.

pub mod commands;
pub mod config;
pub mod error;

pub use config::RunConfig;
pub use error::{CliError, EXIT_CERTIFIED, EXIT_INVALID, EXIT_NOT_CERTIFIED};
