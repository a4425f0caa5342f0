//! Echo-frame bookkeeping: which crosstalk Z-strings survive a schedule.
//!
//! While a CR tone is on, a Z-string over the gate frame (control plus
//! spectators) accumulates phase at its static rate times the product of
//! the frame signs of the qubits it touches. A π pulse about X or Y on a
//! frame qubit flips that qubit's sign for all later segments. Summing
//! sign-weighted durations over the CR segments gives each string an
//! effective exposure time in signed seconds; a string whose exposure is
//! zero is echoed away regardless of its coupling strength.

use crate::device::{CRGateSpec, DriveParity};
use crate::error::{Error, Result};
use crate::qsim::PauliString;
use crate::schedule::{PulseAxis, PulseSchedule, SegmentKind};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Exposure below which a string counts as cancelled (seconds).
pub const SURVIVAL_THRESHOLD_S: f64 = 1e-12;

/// Signed exposure time of every frame Z-string under one schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub gate: String,
    /// Signed seconds of CR exposure, keyed by Z-string label over the
    /// frame (control first, then spectators in device order).
    pub coefficients_s: BTreeMap<String, f64>,
    /// Total time the CR tone was on, regardless of cancellation.
    pub total_cr_on_s: f64,
}

impl FrameReport {
    /// Signed exposure for one label, zero for labels outside the frame
    /// alphabet.
    pub fn coefficient_s(&self, label: &str) -> f64 {
        self.coefficients_s.get(label).copied().unwrap_or(0.0)
    }

    pub fn is_surviving(&self, label: &str) -> bool {
        self.coefficient_s(label).abs() > SURVIVAL_THRESHOLD_S
    }

    /// Labels with nonzero exposure, in lexicographic order.
    pub fn surviving(&self) -> Vec<String> {
        self.coefficients_s
            .iter()
            .filter(|(_, c)| c.abs() > SURVIVAL_THRESHOLD_S)
            .map(|(l, _)| l.clone())
            .collect()
    }
}

/// Track the echo frame of `gate` through `schedule`.
///
/// Only schedules built from this gate's CR segments and π echo pulses are
/// trackable. A CR drive belonging to a different gate, or an X/Y pulse on
/// a frame qubit with angle other than ±π, makes the frame ill-defined and
/// returns an error. Pulses on qubits outside the frame (the target
/// included) and all Z rotations are ignored.
pub fn frame_report(schedule: &PulseSchedule, gate: &CRGateSpec) -> Result<FrameReport> {
    let frame = gate.frame_labels();
    let n = frame.len();
    let labels: Vec<String> = (0..1usize << n)
        .map(|mask| PauliString::z_from_mask(mask, n).label())
        .collect();
    let mut signs = vec![1.0f64; n];
    let mut coefficients = vec![0.0f64; 1 << n];
    let mut total_cr_on = 0.0;

    for segment in &schedule.segments {
        match &segment.kind {
            SegmentKind::CrDrive { gate: name, sign, .. } => {
                if *name != gate.name {
                    return Err(Error::UntrackableSchedule(format!(
                        "segment drives gate {name} while tracking the frame of {}",
                        gate.name
                    )));
                }
                total_cr_on += segment.duration_s;
                for (mask, coefficient) in coefficients.iter_mut().enumerate() {
                    let mut chi = 1.0;
                    for (pos, s) in signs.iter().enumerate() {
                        if (mask >> (n - 1 - pos)) & 1 == 1 {
                            chi *= s;
                        }
                    }
                    if gate.parity_tag(&labels[mask]) == DriveParity::Odd {
                        chi *= f64::from(*sign);
                    }
                    *coefficient += chi * segment.duration_s;
                }
            }
            SegmentKind::Pulses { pulses } => {
                for pulse in pulses {
                    let Some(pos) = frame.iter().position(|q| *q == pulse.qubit) else {
                        continue;
                    };
                    match pulse.axis {
                        PulseAxis::Z => {}
                        PulseAxis::X | PulseAxis::Y => {
                            if (pulse.angle.abs() - PI).abs() <= 1e-9 {
                                signs[pos] = -signs[pos];
                            } else {
                                return Err(Error::UntrackableSchedule(format!(
                                    "{:?} pulse of {} rad on frame qubit {}",
                                    pulse.axis, pulse.angle, pulse.qubit
                                )));
                            }
                        }
                    }
                }
            }
            SegmentKind::Idle => {}
        }
    }

    Ok(FrameReport {
        gate: gate.name.clone(),
        coefficients_s: labels.into_iter().zip(coefficients).collect(),
        total_cr_on_s: total_cr_on,
    })
}
