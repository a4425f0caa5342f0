//! Subcommand implementations and the flag plumbing they share.

pub mod parity;
pub mod ramsey;
pub mod rb;
pub mod readout;
pub mod reconstruct;

use clap::ValueEnum;
use plaquette::{
    default_plaquette, load_device, CRGateSpec, DeviceModel, EcrVariant, Error, NoiseSwitches,
    ParityBasis, Result,
};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Zzzz,
    Xxxx,
}

impl From<BasisArg> for ParityBasis {
    fn from(value: BasisArg) -> Self {
        match value {
            BasisArg::Zzzz => ParityBasis::Zzzz,
            BasisArg::Xxxx => ParityBasis::Xxxx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(name = "2pulse")]
    TwoPulse,
    #[value(name = "4pulse")]
    FourPulse,
}

impl From<VariantArg> for EcrVariant {
    fn from(value: VariantArg) -> Self {
        match value {
            VariantArg::TwoPulse => EcrVariant::TwoPulse,
            VariantArg::FourPulse => EcrVariant::FourPulse,
        }
    }
}

/// Load `--device` (or the PLAQUETTE_DEVICE environment override baked into
/// that flag); fall back to the built-in five-qubit plaquette.
pub fn resolve_device(path: &Option<PathBuf>) -> Result<DeviceModel> {
    match path {
        Some(p) => load_device(p),
        None => Ok(default_plaquette()),
    }
}

/// Record where the device came from for the manifest.
pub fn device_origin(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => p.display().to_string(),
        None => "builtin".to_string(),
    }
}

/// Find a gate by name, tolerating lowercase spellings like `cr4`.
pub fn resolve_gate<'d>(device: &'d DeviceModel, name: &str) -> Result<&'d CRGateSpec> {
    device.gate(name).or_else(|_| device.gate(&name.to_uppercase()))
}

/// Parse a comma separated noise list into switches. `none` and `all` must
/// stand alone; the named sources combine.
pub fn parse_noise(list: &str) -> Result<NoiseSwitches> {
    let items: Vec<&str> =
        list.split(',').map(str::trim).filter(|item| !item.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::BadConfig("empty noise list".into()));
    }
    let lone = |name: &str| {
        if items.len() == 1 {
            Ok(())
        } else {
            Err(Error::BadConfig(format!("'{name}' cannot be combined with other noise sources")))
        }
    };
    let mut switches = NoiseSwitches::none();
    for item in &items {
        match *item {
            "none" => lone("none")?,
            "all" => {
                lone("all")?;
                switches = NoiseSwitches::all();
            }
            "crosstalk" => switches.crosstalk = true,
            "decoherence" => switches.decoherence = true,
            "assignment" => switches.assignment = true,
            other => {
                return Err(Error::BadConfig(format!(
                    "unknown noise source '{other}' (expected none, all, crosstalk, decoherence, assignment)"
                )))
            }
        }
    }
    Ok(switches)
}

/// Parse a comma separated list of sequence lengths.
pub fn parse_lengths(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| {
            item.parse::<usize>()
                .map_err(|_| Error::BadConfig(format!("bad sequence length '{item}'")))
        })
        .collect()
}
