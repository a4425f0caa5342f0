//! Conditional CR Ramsey interferometry: measures the Z-frequency shift of
//! one spectator while a CR tone is held on, conditioned on the basis state
//! of the control and the other spectators.

use crate::analysis::{extract_frequency, FrequencyEstimate, ZetaTable, MEASURED_POSITIONS};
use crate::device::{CRGateSpec, DeviceModel};
use crate::error::{Error, Result};
use crate::qsim::{idle_noise, ket_plus, DensityMatrix, PauliString};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, TAU};

/// Grid and frame settings for one Ramsey trace.
#[derive(Debug, Clone, Serialize)]
pub struct RamseyConfig {
    /// Number of evenly spaced delay points, including zero delay.
    pub n_points: usize,
    /// Longest Ramsey delay in seconds.
    pub max_delay_s: f64,
    /// Software detuning of the closing pulse's rotating frame (Hz).
    pub detuning_hz: f64,
    /// Apply the measured qubit's T1/T2 during the delay.
    pub decoherence: bool,
}

impl Default for RamseyConfig {
    fn default() -> Self {
        Self { n_points: 256, max_delay_s: 33e-6, detuning_hz: 2e6, decoherence: true }
    }
}

/// One measured Ramsey fringe. The measured spectator starts in |+>, idles
/// (with the CR tone on or off), and is closed with a pi/2 pulse whose phase
/// advances at the software detuning, so the recorded expectation value
/// oscillates at detuning + conditional shift.
///
/// Decoherence acts on the measured qubit only: the conditioning qubits are
/// treated as frozen Z-basis references for the duration of the trace.
#[derive(Debug, Clone, Serialize)]
pub struct RamseyTrace {
    pub gate: String,
    /// Label of the measured spectator qubit.
    pub measured: String,
    /// Frame position (1..=3) of the measured spectator.
    pub measured_position: usize,
    /// Conditioning bits over (control, remaining spectators ascending),
    /// most significant bit first.
    pub conditioning: u8,
    /// Frame-ordered state label with the measured position marked, e.g.
    /// "01▲0" for conditioning 010 measured at frame position 2.
    pub label: String,
    pub cr_on: bool,
    pub detuning_hz: f64,
    pub delays_s: Vec<f64>,
    /// Z expectation after the closing pulse, one entry per delay.
    pub signal: Vec<f64>,
}

impl RamseyTrace {
    /// Fit the fringe and return the detuning-subtracted frequency estimate.
    /// Extraction failures are annotated with the trace identity.
    pub fn extract_frequency(&self) -> Result<FrequencyEstimate> {
        extract_frequency(&self.delays_s, &self.signal, self.detuning_hz).map_err(|e| match e {
            Error::ExtractionFailure(msg) => Error::ExtractionFailure(format!(
                "{} {} (cr {}): {msg}",
                self.gate,
                self.label,
                if self.cr_on { "on" } else { "off" }
            )),
            other => other,
        })
    }
}

/// Conditioning frame positions for a measured position: the control first,
/// then the remaining spectator positions in ascending order.
fn conditioning_positions(n_frame: usize, measured_position: usize) -> Vec<usize> {
    let mut positions = vec![0];
    positions.extend((1..n_frame).filter(|&p| p != measured_position));
    positions
}

/// Z frequency of the measured spectator conditioned on the other frame
/// qubits' basis state: the signed sum of every stored coupling with a Z at
/// the measured position, weighted by the conditioning eigenvalues.
fn conditional_frequency_hz(
    gate: &CRGateSpec,
    measured_position: usize,
    conditioning: u8,
) -> f64 {
    let n_frame = gate.spectators.len() + 1;
    let positions = conditioning_positions(n_frame, measured_position);
    let mut shift = 0.0;
    for (label, &value) in &gate.crosstalk.values_hz {
        let chars: Vec<char> = label.chars().collect();
        if chars.get(measured_position) != Some(&'Z') {
            continue;
        }
        let mut sign = 1.0;
        for (i, &p) in positions.iter().enumerate() {
            let bit = (conditioning >> (positions.len() - 1 - i)) & 1;
            if chars[p] == 'Z' && bit == 1 {
                sign = -sign;
            }
        }
        shift += sign * value;
    }
    shift
}

fn frame_label(n_frame: usize, measured_position: usize, conditioning: u8) -> String {
    let positions = conditioning_positions(n_frame, measured_position);
    let mut label = String::new();
    for p in 0..n_frame {
        if p == measured_position {
            label.push('▲');
        } else {
            let i = positions.iter().position(|&q| q == p).expect("conditioning position");
            let bit = (conditioning >> (positions.len() - 1 - i)) & 1;
            label.push(if bit == 1 { '1' } else { '0' });
        }
    }
    label
}

/// Closing pi/2 pulse about the in-plane axis at angle `phase_rad` from X:
/// exp(-i (pi/4) (cos(phase) X + sin(phase) Y)).
fn closing_pulse(phase_rad: f64) -> DMatrix<Complex64> {
    let cos_half = Complex64::new(std::f64::consts::FRAC_PI_4.cos(), 0.0);
    let off = Complex64::new(0.0, -std::f64::consts::FRAC_PI_4.sin());
    DMatrix::from_row_slice(
        2,
        2,
        &[
            cos_half,
            off * Complex64::new(0.0, -phase_rad).exp(),
            off * Complex64::new(0.0, phase_rad).exp(),
            cos_half,
        ],
    )
}

/// Run one conditional Ramsey trace on a spectator of `gate`.
///
/// The conditioning qubits are prepared in Z eigenstates per `conditioning`
/// (control is the most significant bit), the measured spectator in |+>.
/// With the tone on, the stored crosstalk advances the fringe by the
/// conditional shift; the closing pulse phase advances at the software
/// detuning either way.
pub fn run_cr_ramsey(
    gate: &CRGateSpec,
    measured: &str,
    conditioning: u8,
    cr_on: bool,
    config: &RamseyConfig,
    device: &DeviceModel,
) -> Result<RamseyTrace> {
    let measured_position = gate.spectator_position(measured)?;
    let n_frame = gate.spectators.len() + 1;
    let n_conditioning = n_frame - 1;
    if usize::from(conditioning) >= (1 << n_conditioning) {
        return Err(Error::BadConfig(format!(
            "conditioning {conditioning} does not fit {n_conditioning} bits"
        )));
    }
    if config.n_points < 2 {
        return Err(Error::BadConfig(format!(
            "a Ramsey trace needs at least 2 delay points, got {}",
            config.n_points
        )));
    }
    if !(config.max_delay_s > 0.0) || !config.max_delay_s.is_finite() {
        return Err(Error::BadConfig(format!(
            "max delay must be positive and finite, got {}",
            config.max_delay_s
        )));
    }
    if !config.detuning_hz.is_finite() {
        return Err(Error::BadConfig("detuning must be finite".into()));
    }
    device.qubit(measured)?;

    let shift_hz =
        if cr_on { conditional_frequency_hz(gate, measured_position, conditioning) } else { 0.0 };
    let z = PauliString::from_label("Z")?;
    let dt = config.max_delay_s / (config.n_points - 1) as f64;
    let mut delays = Vec::with_capacity(config.n_points);
    let mut signal = Vec::with_capacity(config.n_points);
    for i in 0..config.n_points {
        let t = i as f64 * dt;
        let mut state = DensityMatrix::from_product(&[ket_plus()])?;
        if shift_hz != 0.0 {
            state.evolve_diagonal(&[(z.clone(), shift_hz)], t)?;
        }
        if config.decoherence && t > 0.0 {
            idle_noise(&mut state, &[(0, measured)], t, device)?;
        }
        let phase = -TAU * config.detuning_hz * t - FRAC_PI_2;
        state.apply_unitary(&closing_pulse(phase), &[0])?;
        delays.push(t);
        signal.push(state.expectation_z(0)?);
    }

    Ok(RamseyTrace {
        gate: gate.name.clone(),
        measured: measured.to_string(),
        measured_position,
        conditioning,
        label: frame_label(n_frame, measured_position, conditioning),
        cr_on,
        detuning_hz: config.detuning_hz,
        delays_s: delays,
        signal,
    })
}

/// Measure all 24 conditional shifts of a three-spectator gate: for each
/// measured position (last frame position first) and each conditioning
/// state, one tone-on and one tone-off trace are recorded and the shift is
/// the difference of the extracted frequencies.
pub fn run_full_zeta_sweep(
    gate: &CRGateSpec,
    config: &RamseyConfig,
    device: &DeviceModel,
) -> Result<ZetaTable> {
    if gate.spectators.len() != 3 {
        return Err(Error::BadConfig(format!(
            "the 24-row shift table needs exactly 3 spectators, gate {} has {}",
            gate.name,
            gate.spectators.len()
        )));
    }
    let frame = gate.frame_labels();
    let mut entries = vec![0.0; 24];
    for (block, &position) in MEASURED_POSITIONS.iter().enumerate() {
        let measured = frame[position];
        for conditioning in 0..8u8 {
            let on = run_cr_ramsey(gate, measured, conditioning, true, config, device)?;
            let off = run_cr_ramsey(gate, measured, conditioning, false, config, device)?;
            let f_on = on.extract_frequency()?;
            let f_off = off.extract_frequency()?;
            entries[block * 8 + usize::from(conditioning)] =
                f_on.frequency_hz - f_off.frequency_hz;
        }
    }
    ZetaTable::new(&gate.name, entries)
}
