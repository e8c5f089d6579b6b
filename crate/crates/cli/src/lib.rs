//! Command-line front end for `diagport`: state-file parsing, report
//! shapes and the `run` / `branches` / `verify` / `bench` commands.

pub mod commands;
pub mod report;
pub mod spec;

pub use commands::{dispatch, Cli, CliError, CommandKind, Output};
pub use spec::{parse_state_file, InputSpec, Payload, SpecError};
