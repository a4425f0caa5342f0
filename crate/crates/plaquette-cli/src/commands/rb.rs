//! The `rb` subcommand: randomized benchmarking of single qubits, all five
//! qubits simultaneously, or a two-qubit gate built from an echoed CR pair.

use crate::commands::{
    device_origin, parse_lengths, parse_noise, resolve_device, resolve_gate, VariantArg,
};
use crate::manifest;
use clap::{Args, ValueEnum};
use plaquette::{run_rb, Error, RbConfig, RbKind, Result};
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RbKindArg {
    Single,
    Simultaneous,
    TwoQubit,
}

#[derive(Debug, Args)]
pub struct RbArgs {
    /// What to benchmark.
    #[arg(long, value_enum)]
    pub kind: RbKindArg,
    /// Qubit label for --kind single, gate name for --kind two-qubit.
    #[arg(long)]
    pub target: Option<String>,
    /// Echo variant for two-qubit benchmarking.
    #[arg(long, value_enum, default_value_t = VariantArg::TwoPulse)]
    pub variant: VariantArg,
    /// Comma separated sequence lengths; defaults fit the kind.
    #[arg(long)]
    pub lengths: Option<String>,
    /// Random sequences per length.
    #[arg(long, default_value_t = 30)]
    pub sequences: usize,
    /// Shots per sequence.
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Comma separated noise sources: none, all, crosstalk, decoherence,
    /// assignment.
    #[arg(long, default_value = "all")]
    pub noise: String,
    /// Average infidelity of a depolarizing channel injected after every
    /// random Clifford (for recovery checks).
    #[arg(long)]
    pub inject_depolarizing: Option<f64>,
    /// Device model TOML; omit for the built-in plaquette.
    #[arg(long, env = "PLAQUETTE_DEVICE")]
    pub device: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn default_lengths(kind: RbKindArg) -> Vec<usize> {
    match kind {
        RbKindArg::Single | RbKindArg::Simultaneous => vec![1, 25, 50, 100, 200, 400],
        RbKindArg::TwoQubit => vec![1, 4, 8, 16, 32, 64],
    }
}

pub fn run(args: &RbArgs) -> Result<()> {
    let started = Instant::now();
    let device = resolve_device(&args.device)?;
    let kind = match args.kind {
        RbKindArg::Single => {
            let qubit = args.target.clone().ok_or_else(|| {
                Error::BadConfig("--kind single needs --target QUBIT".into())
            })?;
            device.qubit(&qubit)?;
            RbKind::Single { qubit }
        }
        RbKindArg::Simultaneous => {
            if args.target.is_some() {
                return Err(Error::BadConfig(
                    "--target does not apply to --kind simultaneous".into(),
                ));
            }
            RbKind::Simultaneous
        }
        RbKindArg::TwoQubit => {
            let name = args.target.clone().ok_or_else(|| {
                Error::BadConfig("--kind two-qubit needs --target GATE".into())
            })?;
            let gate = resolve_gate(&device, &name)?;
            RbKind::TwoQubit { gate: gate.name.clone(), variant: args.variant.into() }
        }
    };
    let lengths = match &args.lengths {
        Some(list) => parse_lengths(list)?,
        None => default_lengths(args.kind),
    };
    if let Some(rate) = args.inject_depolarizing {
        if !(0.0..1.0).contains(&rate) {
            return Err(Error::BadConfig(format!(
                "injected depolarizing rate must be in [0, 1), got {rate}"
            )));
        }
    }

    let mut config = RbConfig::new(lengths, args.seed);
    config.n_sequences = args.sequences;
    config.shots = args.shots;
    config.noise = parse_noise(&args.noise)?;
    config.injected_depolarizing = args.inject_depolarizing;
    let report = run_rb(&kind, &config, &device)?;

    let mut survival_csv =
        String::from("# mean survival over random sequences at each length\n");
    survival_csv.push_str("register,length,mean_survival,se\n");
    for register in &report.registers {
        let fit = &register.fit;
        for ((length, survival), se) in
            fit.lengths.iter().zip(&fit.survivals).zip(&fit.survival_ses)
        {
            survival_csv.push_str(&format!(
                "\"{}\",{length},{survival},{se}\n",
                register.register
            ));
        }
    }

    let config_json = json!({
        "kind": report.kind,
        "lengths": report.lengths,
        "sequences": report.n_sequences,
        "shots": report.shots,
        "noise": report.noise,
        "injected_depolarizing": report.injected_depolarizing,
        "device": device_origin(&args.device),
    });
    manifest::emit(
        &args.out,
        "rb",
        config_json,
        Some(args.seed),
        started,
        &[
            ("rb_survival.csv".to_string(), survival_csv),
            (
                "rb_fit.json".to_string(),
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
            ),
        ],
    )?;
    for register in &report.registers {
        println!(
            "{}: average gate fidelity {:.4} (p = {:.4} +/- {:.4})",
            register.register,
            register.fit.average_gate_fidelity,
            register.fit.p,
            register.fit.p_se
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_lengths_suit_each_kind() {
        assert_eq!(default_lengths(RbKindArg::Single).len(), 6);
        assert!(default_lengths(RbKindArg::TwoQubit).iter().all(|&l| l <= 64));
    }
}
