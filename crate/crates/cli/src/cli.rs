use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commands::{self, CliError};

#[derive(Debug, Parser)]
#[command(name = "pulsecouple", version, about = "Delay-coupled pulse oscillator networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    pub config: PathBuf,
    /// Refuse to run when f(2 tau) + N epsilon >= 1.
    #[arg(long)]
    pub strict: bool,
    /// Write the CSV/SVG artifact here instead of the configured path.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the config and report the coupling bound.
    Validate(Common),
    /// Run the configured scenario and print a summary.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Independent seeded trials, run in parallel.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Write stroboscopic frames as CSV or SVG.
    Strobe(Common),
    /// Run and fail with exit code 4 if a firing audit is violated.
    Audit(Common),
    /// Iterate the two-clique return map and write the orbit CSV.
    Returnmap(Common),
    /// Trace the two-oscillator coincidence scenario.
    Fig3(Common),
}

/// Parses the config and runs the subcommand. Artifacts go to the output
/// path or stdout; the JSON summary goes to stdout, or to stderr when the
/// artifact already occupies stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Validate(c) | Command::Strobe(c) | Command::Audit(c) | Command::Returnmap(c) | Command::Fig3(c) => c,
        Command::Simulate { common, .. } => common,
    };
    let mut config = commands::read_config(&common.config)?;
    if let Some(path) = &common.output {
        config.output.path = Some(path.clone());
    }
    let strict = common.strict;
    let artifact_on_stdout = config.output.path.is_none();
    match &cli.command {
        Command::Validate(_) => emit(&commands::validate(&config, strict)?, false),
        Command::Simulate { trials: Some(t), .. } => emit(&commands::simulate_batch(&config, *t, strict)?, false),
        Command::Simulate { trials: None, .. } => emit(&commands::simulate(&config, strict)?, false),
        Command::Strobe(_) => emit(&commands::strobe(&config, strict)?, artifact_on_stdout),
        Command::Audit(_) => match commands::audit(&config, strict) {
            Ok(s) => emit(&s, false),
            Err(e) => {
                if let CliError::Audit { summary, .. } = &e {
                    emit(summary.as_ref(), false);
                }
                return Err(e);
            }
        },
        Command::Returnmap(_) => emit(&commands::returnmap(&config, strict)?, artifact_on_stdout),
        Command::Fig3(_) => emit(&commands::fig3(&config, strict)?, artifact_on_stdout),
    }
    Ok(())
}

fn emit(value: &impl Serialize, to_stderr: bool) {
    let text = serde_json::to_string_pretty(value).expect("summary serializes");
    if to_stderr {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
}
