//! Problem files and batch commands for the `hyperloc` engine.

pub mod commands;
pub mod error;
pub mod examples;
pub mod schema;

pub use commands::{export_fixtures, load, run, run_problem, selftest, Command, Flags, Report};
pub use error::CliError;
pub use schema::{Problem, ProblemFile};
