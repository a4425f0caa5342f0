//! The `reconstruct` subcommand: minimum-norm Z-string strengths from a
//! measured 24-row shift table.

use crate::manifest;
use clap::Args;
use plaquette::analysis::SENSITIVITY_LIMIT_HZ;
use plaquette::{reconstruct_alpha, Result, ZetaTable};
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Shift table CSV (24 rows, as written by `ramsey` without
    /// `--measured`).
    #[arg(long)]
    pub zeta: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

pub fn run(args: &ReconstructArgs) -> Result<()> {
    let started = Instant::now();
    let table = ZetaTable::read_csv(&args.zeta)?;
    let estimate = reconstruct_alpha(&table);

    let significant: Vec<serde_json::Value> = estimate
        .significant()
        .into_iter()
        .map(|(label, value_hz)| json!({ "z_string": label, "alpha_hz": value_hz }))
        .collect();
    let below: Vec<String> = plaquette::AlphaEstimate::labels()
        .into_iter()
        .filter(|label| estimate.below_sensitivity(label).unwrap_or(false))
        .collect();
    let report = json!({
        "gate": estimate.gate,
        "residual_norm_hz": estimate.residual_norm_hz,
        "sensitivity_limit_hz": SENSITIVITY_LIMIT_HZ,
        "significant": significant,
        "below_sensitivity": below,
    });

    let config_json = json!({
        "zeta": args.zeta.display().to_string(),
        "gate": estimate.gate,
    });
    let alpha_name = format!("alpha_{}.csv", estimate.gate.to_lowercase());
    manifest::emit(
        &args.out,
        "reconstruct",
        config_json,
        None,
        started,
        &[
            (alpha_name, estimate.to_csv_string()),
            (
                "reconstruction.json".to_string(),
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
            ),
        ],
    )?;
    for (label, value_hz) in estimate.significant() {
        println!("{} {label}: {:.1} kHz", estimate.gate, value_hz / 1e3);
    }
    println!(
        "{} residual {:.1} kHz over the solve",
        estimate.gate,
        estimate.residual_norm_hz / 1e3
    );
    Ok(())
}
