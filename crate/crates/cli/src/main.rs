//! `impa`: design and simulation of SNAIL-array parametric amplifiers.

mod commands;
mod error;
mod format;
mod spec_file;
mod svg;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "impa",
    version,
    about = "SNAIL-array parametric amplifier design and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Potential coefficients, nonlinearities and resonance versus flux
    Characterize(commands::CharacterizeArgs),
    /// Synthesize transformer sections from a Chebyshev prototype
    Design(commands::DesignArgs),
    /// Reflection gain of the pumped amplifier versus frequency
    Gain(commands::GainArgs),
    /// Resonance frequency versus flux, optionally with coil current
    Tune(commands::TuneArgs),
    /// Relative saturation power for scaled critical current and Q
    Saturation(commands::SaturationArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Characterize(a) => commands::characterize(a),
        Command::Design(a) => commands::design(a),
        Command::Gain(a) => commands::gain(a),
        Command::Tune(a) => commands::tune(a),
        Command::Saturation(a) => commands::saturation(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let message = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("{}", CliError::input(message));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
