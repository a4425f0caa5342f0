//! Command line front end for the plaquette simulator.
//!
//! Every subcommand resolves its configuration, runs the experiment or
//! analysis, and writes its outputs plus a run manifest atomically into the
//! chosen directory. Exit codes: 0 success, 2 usage or configuration
//! problems, 3 runtime or numerical failures.

mod commands;
mod manifest;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plaquette", version, about = "Five-qubit plaquette simulator and analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run weight-four parity checks over all sixteen data states.
    Parity(commands::parity::ParityArgs),
    /// CR Ramsey interferometry: full shift table or one conditioned trace.
    Ramsey(commands::ramsey::RamseyArgs),
    /// Reconstruct Z-string strengths from a measured shift table.
    Reconstruct(commands::reconstruct::ReconstructArgs),
    /// Randomized benchmarking of single-qubit or two-qubit gates.
    Rb(commands::rb::RbArgs),
    /// Readout calibration histograms and assignment fidelity.
    ReadoutCal(commands::readout::ReadoutArgs),
}

/// Usage and configuration mistakes exit with 2, runtime and numerical
/// failures with 3.
fn exit_code_for(error: &plaquette::Error) -> u8 {
    use plaquette::Error;
    match error {
        Error::BadConfig(_)
        | Error::UnknownQubit(_)
        | Error::UnknownGate(_)
        | Error::DeviceInvalid(_)
        | Error::DeviceParse { .. }
        | Error::BadZetaTable { .. }
        | Error::BadCsv { .. }
        | Error::BadPauliLabel { .. }
        | Error::BadProbability { .. }
        | Error::NotASpectator { .. }
        | Error::QubitNotInGate { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Parity(args) => commands::parity::run(args),
        Command::Ramsey(args) => commands::ramsey::run(args),
        Command::Reconstruct(args) => commands::reconstruct::run(args),
        Command::Rb(args) => commands::rb::run(args),
        Command::ReadoutCal(args) => commands::readout::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
