//! Command-line front end for the capacity sweeps: argument and config-file
//! parsing, a rayon-backed trial runner, and CSV output.

pub mod args;
pub mod config;
pub mod output;
pub mod parallel;
pub mod run;

pub use args::{parse_args, CliInvocation, Output, Subcommand, UsageError};
pub use run::{run, RunError};
