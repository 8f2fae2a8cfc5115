//! Config-driven front end for the pulse-coupled oscillator engine: JSON
//! configs, seeded initial conditions, CSV/SVG writers and the subcommands
//! behind the `pulsecouple` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod sampling;

pub use commands::{CliError, RunSummary};
pub use config::{parse_config, ConfigError, RunConfig};
