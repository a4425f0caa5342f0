//! The `ramsey` subcommand: CR Ramsey interferometry on spectator qubits.
//!
//! Without `--measured` it sweeps all 24 conditioned experiments and emits
//! the shift table CSV. With `--measured` (and optionally `--conditioning`)
//! it records one fringe with the tone on and off and extracts both
//! frequencies.

use crate::commands::{device_origin, resolve_device, resolve_gate};
use crate::manifest;
use clap::Args;
use plaquette::{run_cr_ramsey, run_full_zeta_sweep, Error, RamseyConfig, Result};
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Args)]
pub struct RamseyArgs {
    /// Gate whose CR tone is probed (cr1..cr4 on the built-in device).
    #[arg(long)]
    pub gate: String,
    /// Spectator qubit for a single trace; omit for the full 24-row sweep.
    #[arg(long)]
    pub measured: Option<String>,
    /// Conditioning bits for the single trace, control bit first then the
    /// remaining spectators in frame order (e.g. 010). Defaults to 000.
    #[arg(long)]
    pub conditioning: Option<String>,
    /// Device model TOML; omit for the built-in plaquette.
    #[arg(long, env = "PLAQUETTE_DEVICE")]
    pub device: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn parse_conditioning(bits: &str) -> Result<u8> {
    if bits.len() != 3 || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::BadConfig(format!(
            "conditioning must be three binary digits, got '{bits}'"
        )));
    }
    Ok(u8::from_str_radix(bits, 2).expect("validated binary"))
}

pub fn run(args: &RamseyArgs) -> Result<()> {
    let started = Instant::now();
    if args.conditioning.is_some() && args.measured.is_none() {
        return Err(Error::BadConfig(
            "--conditioning only applies to a single trace; add --measured".into(),
        ));
    }
    let device = resolve_device(&args.device)?;
    let gate = resolve_gate(&device, &args.gate)?;
    let config = RamseyConfig::default();

    let config_json = |mode: &str| {
        json!({
            "gate": gate.name,
            "mode": mode,
            "measured": args.measured,
            "conditioning": args.conditioning,
            "n_points": config.n_points,
            "max_delay_s": config.max_delay_s,
            "detuning_hz": config.detuning_hz,
            "decoherence": config.decoherence,
            "device": device_origin(&args.device),
        })
    };

    match &args.measured {
        None => {
            let table = run_full_zeta_sweep(gate, &config, &device)?;
            let file_name = format!("zeta_{}.csv", gate.name.to_lowercase());
            manifest::emit(
                &args.out,
                "ramsey",
                config_json("full-sweep"),
                None,
                started,
                &[(file_name, table.to_csv_string())],
            )?;
            println!("swept 24 conditioned shifts for {}", gate.name);
        }
        Some(measured) => {
            let conditioning = parse_conditioning(args.conditioning.as_deref().unwrap_or("000"))?;
            let on = run_cr_ramsey(gate, measured, conditioning, true, &config, &device)?;
            let off = run_cr_ramsey(gate, measured, conditioning, false, &config, &device)?;
            let f_on = on.extract_frequency()?;
            let f_off = off.extract_frequency()?;

            let mut trace_csv = String::from(
                "# Ramsey fringe of the measured spectator with the CR tone on and off\n",
            );
            trace_csv.push_str("delay_s,signal_cr_on,signal_cr_off\n");
            for ((delay, s_on), s_off) in
                on.delays_s.iter().zip(&on.signal).zip(&off.signal)
            {
                trace_csv.push_str(&format!("{delay},{s_on},{s_off}\n"));
            }

            let zeta_hz = f_on.frequency_hz - f_off.frequency_hz;
            let frequency_json = json!({
                "gate": on.gate,
                "measured": on.measured,
                "measured_position": on.measured_position,
                "conditioning": format!("{conditioning:03b}"),
                "label": on.label,
                "detuning_hz": on.detuning_hz,
                "cr_on": f_on,
                "cr_off": f_off,
                "zeta_hz": zeta_hz,
            });
            manifest::emit(
                &args.out,
                "ramsey",
                config_json("single-trace"),
                None,
                started,
                &[
                    ("ramsey_trace.csv".to_string(), trace_csv),
                    (
                        "ramsey_frequency.json".to_string(),
                        serde_json::to_string_pretty(&frequency_json)
                            .expect("frequency report serializes")
                            + "\n",
                    ),
                ],
            )?;
            println!(
                "{} {}: conditional shift {:.1} kHz",
                on.gate,
                on.label,
                zeta_hz / 1e3
            );
        }
    }
    Ok(())
}
