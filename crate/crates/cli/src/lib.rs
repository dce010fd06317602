//! Config parsing, command dispatch and CSV output for the `tcqsim` binary.

pub mod config;
pub mod run;

pub use config::{parse_config, parse_config_for, Command, ConfigError, RunConfig};
pub use run::{execute, render_csv, RunError, Table};
