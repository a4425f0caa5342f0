//! Device parameters: qubit coherence and readout numbers, CR gate
//! geometry and timing, and per-gate crosstalk tables.
//!
//! The built-in five-qubit plaquette has four data qubits D1..D4 around a
//! central syndrome qubit S1, with four CR gates named CR1..CR4. Crosstalk
//! tables are indexed by Z-string labels over the gate frame: position 0 is
//! the control qubit, positions 1..=3 the spectators in listed order. The
//! gate target never appears in the frame.

use crate::error::{Error, Result};
use crate::qsim::{Pauli, PauliString};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// How a crosstalk term responds to flipping the CR drive sign.
///
/// `Even` terms keep their sign when the drive amplitude is negated;
/// `Odd` terms flip with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveParity {
    Even,
    Odd,
}

/// Coherence and readout parameters of one qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitParams {
    pub label: String,
    pub f01_hz: f64,
    pub t1_s: f64,
    pub t2_s: f64,
    /// Probability of reading 1 when the qubit was prepared in |0⟩.
    pub readout_p10: f64,
    /// Probability of reading 0 when the qubit was prepared in |1⟩.
    pub readout_p01: f64,
}

/// Z-string coefficients (Hz) of the CR-activated diagonal Hamiltonian over
/// the gate frame. Absent labels mean 0 Hz.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaTable {
    /// Number of qubits in the frame (control plus spectators).
    pub n: usize,
    /// Z-string label to strength in Hz.
    #[serde(default)]
    pub values_hz: BTreeMap<String, f64>,
    /// Labels whose true magnitude is only bounded above by roughly
    /// 100 kHz; their stored value is 0.
    #[serde(default)]
    pub below_sensitivity: Vec<String>,
}

impl AlphaTable {
    pub fn new(n: usize) -> Self {
        Self { n, values_hz: BTreeMap::new(), below_sensitivity: Vec::new() }
    }

    /// Strength of one Z-string in Hz; absent labels read as 0.
    pub fn value_hz(&self, label: &str) -> f64 {
        self.values_hz.get(label).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, label: &str, value_hz: f64) {
        self.values_hz.insert(label.to_string(), value_hz);
    }

    pub fn is_below_sensitivity(&self, label: &str) -> bool {
        self.below_sensitivity.iter().any(|l| l == label)
    }

    /// All stored entries as parsed Pauli strings with strengths, ready for
    /// diagonal evolution over the frame.
    pub fn coeffs(&self) -> Result<Vec<(PauliString, f64)>> {
        self.values_hz
            .iter()
            .map(|(label, &v)| Ok((PauliString::from_label(label)?, v)))
            .collect()
    }

    fn check_label(&self, label: &str, owner: &str) -> Result<()> {
        let ps = PauliString::from_label(label).map_err(|_| {
            Error::DeviceInvalid(format!("{owner}: bad crosstalk label '{label}'"))
        })?;
        if ps.len() != self.n {
            return Err(Error::DeviceInvalid(format!(
                "{owner}: crosstalk label '{label}' has length {}, expected {}",
                ps.len(),
                self.n
            )));
        }
        if !ps.is_diagonal() {
            return Err(Error::DeviceInvalid(format!(
                "{owner}: crosstalk label '{label}' must contain only I and Z"
            )));
        }
        Ok(())
    }

    fn validate(&self, owner: &str) -> Result<()> {
        if self.n == 0 {
            return Err(Error::DeviceInvalid(format!("{owner}: crosstalk frame size is 0")));
        }
        let identity: String = std::iter::repeat('I').take(self.n).collect();
        let control_only: String = std::iter::once('Z')
            .chain(std::iter::repeat('I').take(self.n - 1))
            .collect();
        for (label, &value) in &self.values_hz {
            self.check_label(label, owner)?;
            if !value.is_finite() {
                return Err(Error::DeviceInvalid(format!(
                    "{owner}: crosstalk '{label}' is not finite"
                )));
            }
            if label == &identity && value != 0.0 {
                return Err(Error::DeviceInvalid(format!(
                    "{owner}: the all-identity entry must be 0 by convention"
                )));
            }
            if label == &control_only && value != 0.0 {
                return Err(Error::DeviceInvalid(format!(
                    "{owner}: the control-only entry '{control_only}' must be 0 by convention"
                )));
            }
        }
        for label in &self.below_sensitivity {
            self.check_label(label, owner)?;
            if self.value_hz(label) != 0.0 {
                return Err(Error::DeviceInvalid(format!(
                    "{owner}: below-sensitivity entry '{label}' must be stored as 0"
                )));
            }
        }
        Ok(())
    }
}

/// Geometry, timing, and crosstalk of one echoed cross-resonance gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CRGateSpec {
    pub name: String,
    pub control: String,
    pub target: String,
    /// Frame positions 1..=3, in order.
    pub spectators: Vec<String>,
    /// Rate of the intended ZX/2 term at calibrated amplitude.
    pub zx_rate_hz: f64,
    /// CR-on time of each of the two segments of the 2-pulse echo.
    pub segment_duration_2pulse_s: f64,
    /// CR-on time of each of the four segments of the 4-pulse echo.
    pub segment_duration_4pulse_s: f64,
    pub crosstalk: AlphaTable,
    /// Drive-sign dependence per crosstalk term; absent labels are even.
    #[serde(default)]
    pub parity_tags: BTreeMap<String, DriveParity>,
}

impl CRGateSpec {
    /// Frame qubit labels: control first, then spectators.
    pub fn frame_labels(&self) -> Vec<&str> {
        let mut labels = vec![self.control.as_str()];
        labels.extend(self.spectators.iter().map(String::as_str));
        labels
    }

    /// Frame position of a qubit (0 = control), if it is in the frame.
    pub fn frame_position(&self, qubit: &str) -> Option<usize> {
        self.frame_labels().iter().position(|l| *l == qubit)
    }

    /// Frame position of a spectator qubit (1..=3).
    pub fn spectator_position(&self, qubit: &str) -> Result<usize> {
        match self.frame_position(qubit) {
            Some(0) | None => Err(Error::NotASpectator {
                gate: self.name.clone(),
                qubit: qubit.to_string(),
            }),
            Some(p) => Ok(p),
        }
    }

    pub fn parity_tag(&self, label: &str) -> DriveParity {
        self.parity_tags.get(label).copied().unwrap_or(DriveParity::Even)
    }

    fn validate(&self, device: &DeviceModel) -> Result<()> {
        let owner = format!("gate {}", self.name);
        let mut involved = vec![self.control.clone(), self.target.clone()];
        involved.extend(self.spectators.iter().cloned());
        for label in &involved {
            if device.qubit(label).is_err() {
                return Err(Error::DeviceInvalid(format!(
                    "{owner}: references undefined qubit '{label}'"
                )));
            }
        }
        let mut sorted = involved.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != involved.len() {
            return Err(Error::DeviceInvalid(format!(
                "{owner}: control, target, and spectators must be distinct"
            )));
        }
        let expected_spectators = device.qubits.len().saturating_sub(2);
        if self.spectators.len() != expected_spectators {
            return Err(Error::DeviceInvalid(format!(
                "{owner}: expected {expected_spectators} spectators, got {}",
                self.spectators.len()
            )));
        }
        for (field, value) in [
            ("zx_rate_hz", self.zx_rate_hz),
            ("segment_duration_2pulse_s", self.segment_duration_2pulse_s),
            ("segment_duration_4pulse_s", self.segment_duration_4pulse_s),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::DeviceInvalid(format!(
                    "{owner}: {field} must be positive and finite, got {value}"
                )));
            }
        }
        if self.crosstalk.n != self.spectators.len() + 1 {
            return Err(Error::DeviceInvalid(format!(
                "{owner}: crosstalk frame size {} does not match control plus {} spectators",
                self.crosstalk.n,
                self.spectators.len()
            )));
        }
        self.crosstalk.validate(&owner)?;
        for label in self.parity_tags.keys() {
            self.crosstalk.check_label(label, &owner)?;
        }
        Ok(())
    }
}

/// A full device: qubits, CR gates, and global timing constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceModel {
    /// Duration of every single-qubit pulse slot.
    pub single_qubit_gate_duration_s: f64,
    /// Readout integration window used by the assignment model.
    pub assignment_integration_time_s: f64,
    pub qubits: Vec<QubitParams>,
    pub cr_gates: Vec<CRGateSpec>,
}

impl DeviceModel {
    pub fn qubit(&self, label: &str) -> Result<&QubitParams> {
        self.qubits
            .iter()
            .find(|q| q.label == label)
            .ok_or_else(|| Error::UnknownQubit(label.to_string()))
    }

    pub fn gate(&self, name: &str) -> Result<&CRGateSpec> {
        self.cr_gates
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGate(name.to_string()))
    }

    pub fn qubit_labels(&self) -> Vec<&str> {
        self.qubits.iter().map(|q| q.label.as_str()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("single_qubit_gate_duration_s", self.single_qubit_gate_duration_s),
            ("assignment_integration_time_s", self.assignment_integration_time_s),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::DeviceInvalid(format!(
                    "{field} must be positive and finite, got {value}"
                )));
            }
        }
        if self.qubits.is_empty() {
            return Err(Error::DeviceInvalid("device has no qubits".into()));
        }
        let mut labels: Vec<&str> = self.qubits.iter().map(|q| q.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != self.qubits.len() {
            return Err(Error::DeviceInvalid("qubit labels must be unique".into()));
        }
        for q in &self.qubits {
            let owner = format!("qubit {}", q.label);
            if q.label.is_empty() {
                return Err(Error::DeviceInvalid("qubit label must be non-empty".into()));
            }
            for (field, value) in [("f01_hz", q.f01_hz), ("t1_s", q.t1_s), ("t2_s", q.t2_s)] {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::DeviceInvalid(format!(
                        "{owner}: {field} must be positive and finite, got {value}"
                    )));
                }
            }
            for (field, value) in [("readout_p10", q.readout_p10), ("readout_p01", q.readout_p01)]
            {
                if !(0.0..0.5).contains(&value) {
                    return Err(Error::DeviceInvalid(format!(
                        "{owner}: {field} must be in [0, 0.5), got {value}"
                    )));
                }
            }
        }
        let mut names: Vec<&str> = self.cr_gates.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.cr_gates.len() {
            return Err(Error::DeviceInvalid("CR gate names must be unique".into()));
        }
        for gate in &self.cr_gates {
            gate.validate(self)?;
        }
        Ok(())
    }
}

/// Assignment fidelity 1 − (p10 + p01)/2 of one qubit's readout.
pub fn effective_assignment_fidelity(q: &QubitParams) -> f64 {
    1.0 - (q.readout_p10 + q.readout_p01) / 2.0
}

/// Load a device from a TOML file and validate it. Unknown keys are errors.
pub fn load_device(path: impl AsRef<Path>) -> Result<DeviceModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let model: DeviceModel = toml::from_str(&text).map_err(|e| Error::DeviceParse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    model.validate()?;
    Ok(model)
}

/// Validate and save a device as TOML.
pub fn save_device(model: &DeviceModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    model.validate()?;
    let text = toml::to_string_pretty(model).map_err(|e| Error::DeviceParse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    std::fs::write(path, text)?;
    Ok(())
}

fn kilohertz(v: f64) -> f64 {
    v * 1e3
}

fn microseconds(v: f64) -> f64 {
    v * 1e-6
}

fn nanoseconds(v: f64) -> f64 {
    v * 1e-9
}

fn plaquette_qubit(label: &str, f01_ghz: f64, t1_us: f64, t2_us: f64) -> QubitParams {
    QubitParams {
        label: label.to_string(),
        f01_hz: f01_ghz * 1e9,
        t1_s: microseconds(t1_us),
        t2_s: microseconds(t2_us),
        readout_p10: 0.016,
        readout_p01: 0.025,
    }
}

fn plaquette_gate(
    name: &str,
    control: &str,
    target: &str,
    spectators: [&str; 3],
    total_2pulse_ns: f64,
    total_4pulse_ns: f64,
    alpha_khz: &[(&str, f64)],
    below: &[&str],
) -> CRGateSpec {
    // The 2-pulse echo spends one 50 ns slot on its control echo pulse and
    // the 4-pulse echo four slots, so the CR-on time per segment follows
    // from the published total gate lengths.
    let seg2 = nanoseconds((total_2pulse_ns - 50.0) / 2.0);
    let seg4 = nanoseconds((total_4pulse_ns - 200.0) / 4.0);
    let mut crosstalk = AlphaTable::new(4);
    for &(label, khz) in alpha_khz {
        crosstalk.set(label, kilohertz(khz));
    }
    crosstalk.below_sensitivity = below.iter().map(|s| s.to_string()).collect();
    CRGateSpec {
        name: name.to_string(),
        control: control.to_string(),
        target: target.to_string(),
        spectators: spectators.iter().map(|s| s.to_string()).collect(),
        // One 2-pulse segment turns ZX by 1/8 of a cycle.
        zx_rate_hz: 1.0 / (8.0 * seg2),
        segment_duration_2pulse_s: seg2,
        segment_duration_4pulse_s: seg4,
        crosstalk,
        parity_tags: BTreeMap::new(),
    }
}

/// The built-in five-qubit plaquette with published coherence times, gate
/// lengths, and crosstalk strengths.
pub fn default_plaquette() -> DeviceModel {
    let qubits = vec![
        plaquette_qubit("D1", 4.79098, 35.1, 40.8),
        plaquette_qubit("D2", 4.80196, 46.9, 31.4),
        plaquette_qubit("D3", 4.89785, 56.1, 44.7),
        plaquette_qubit("D4", 4.94908, 48.5, 35.5),
        plaquette_qubit("S1", 4.65808, 54.3, 44.0),
    ];
    let cr_gates = vec![
        plaquette_gate(
            "CR1",
            "D1",
            "S1",
            ["D2", "D3", "D4"],
            660.0,
            740.0,
            &[("IIIZ", -298.0), ("IIZI", -348.0), ("IZII", -129.0)],
            &["ZIIZ", "ZIZI"],
        ),
        plaquette_gate(
            "CR2",
            "D2",
            "S1",
            ["D1", "D3", "D4"],
            340.0,
            580.0,
            &[("IIIZ", -688.0), ("IZII", -140.0), ("ZIZI", -129.0)],
            &["IIZI", "ZIIZ"],
        ),
        plaquette_gate(
            "CR3",
            "S1",
            "D3",
            ["D1", "D2", "D4"],
            720.0,
            820.0,
            &[("IIIZ", -178.0), ("IIZI", 130.0), ("ZIIZ", 113.0)],
            &["IZII", "ZIZI"],
        ),
        plaquette_gate(
            "CR4",
            "S1",
            "D4",
            ["D1", "D2", "D3"],
            1010.0,
            940.0,
            &[("IIIZ", 640.0), ("ZIIZ", 105.0)],
            &["IIZI", "IZII", "ZIZI"],
        ),
    ];
    let model = DeviceModel {
        single_qubit_gate_duration_s: 50e-9,
        assignment_integration_time_s: 1.248e-6,
        qubits,
        cr_gates,
    };
    debug_assert!(model.validate().is_ok());
    model
}

/// Convenience: the identity-label of an `n`-qubit frame ("III..").
pub fn identity_label(n: usize) -> String {
    std::iter::repeat(Pauli::I.to_char()).take(n).collect()
}
