//! Run manifests and atomic output writing.
//!
//! Every subcommand ends by handing its rendered outputs to [`emit`], which
//! writes each file atomically (write to a temporary sibling, then rename)
//! and drops a `manifest.json` beside them recording the fully resolved
//! configuration, the seed, the tool version, the output names, and the
//! wall-clock duration. Identical flags and seed therefore reproduce every
//! data file byte for byte; only the manifest's wall clock varies.

use plaquette::Result;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// The configuration actually used, defaults and overrides applied.
    pub config: serde_json::Value,
    /// Seed for sampled experiments; null for deterministic analyses.
    pub seed: Option<u64>,
    pub tool_version: String,
    /// File names written into the output directory, manifest excluded.
    pub outputs: Vec<String>,
    pub wall_clock_s: f64,
}

/// Write `contents` to `path` through a temporary sibling so a crash never
/// leaves a truncated file.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Write every named output plus the manifest into `out_dir`, creating the
/// directory when needed. `started` should be the instant the subcommand
/// began resolving its configuration.
pub fn emit(
    out_dir: &Path,
    subcommand: &str,
    config: serde_json::Value,
    seed: Option<u64>,
    started: Instant,
    files: &[(String, String)],
) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    for (name, contents) in files {
        atomic_write(&out_dir.join(name), contents)?;
    }
    let manifest = RunManifest {
        subcommand: subcommand.to_string(),
        config,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: files.iter().map(|(name, _)| name.clone()).collect(),
        wall_clock_s: started.elapsed().as_secs_f64(),
    };
    let rendered =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization is infallible");
    atomic_write(&out_dir.join("manifest.json"), &(rendered + "\n"))?;
    for (name, _) in files {
        println!("wrote {}", out_dir.join(name).display());
    }
    println!("wrote {}", out_dir.join("manifest.json").display());
    Ok(())
}
