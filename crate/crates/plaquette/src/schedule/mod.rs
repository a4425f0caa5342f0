//! Timed pulse schedules for echoed cross-resonance gates and the circuits
//! built from them, plus a symbolic sign-tracking oracle and a density
//! matrix executor.
//!
//! A schedule is an ordered list of segments. Each segment is either a CR
//! drive (the tone is on, turning ZX on the control-target pair while the
//! crosstalk Hamiltonian acts on the frame), a set of simultaneous
//! single-qubit pulses sharing one slot, or an idle gap. Z-axis pulses are
//! virtual and take zero time.

mod builders;
mod frame;
mod simulate;

pub use builders::{
    build_cnot, build_ecr_2pulse, build_ecr_4pulse, hadamard_wrap_segments, rotation_matrix,
    EchoedCr, EcrVariant,
};
pub use frame::{frame_report, FrameReport, SURVIVAL_THRESHOLD_S};
pub use simulate::{
    schedule_unitary, simulate_schedule, unitary_distance_up_to_phase, NoiseToggles,
};

use crate::device::DeviceModel;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rotation axis of a single-qubit pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseAxis {
    X,
    Y,
    Z,
}

/// One single-qubit rotation by `angle` radians about `axis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub qubit: String,
    pub axis: PulseAxis,
    pub angle: f64,
}

impl Pulse {
    pub fn new(qubit: &str, axis: PulseAxis, angle: f64) -> Self {
        Self { qubit: qubit.to_string(), axis, angle }
    }
}

/// What happens during one segment of a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SegmentKind {
    /// CR tone on for the named gate. `sign` is the physical drive
    /// amplitude sign; `zx_angle_rad` is the signed ZX rotation angle the
    /// segment implements on the control-target pair,
    /// U = exp(−i zx_angle/2 · Z⊗X).
    CrDrive { gate: String, sign: i8, zx_angle_rad: f64 },
    /// Simultaneous single-qubit pulses, at most one per qubit.
    Pulses { pulses: Vec<Pulse> },
    /// Nothing driven; decoherence still acts.
    Idle,
}

/// A segment: its kind plus wall-clock duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(flatten)]
    pub kind: SegmentKind,
    pub duration_s: f64,
}

impl Segment {
    pub fn cr_drive(gate: &str, sign: i8, zx_angle_rad: f64, duration_s: f64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::BadConfig(format!("CR drive sign must be +1 or -1, got {sign}")));
        }
        Self::checked(
            SegmentKind::CrDrive { gate: gate.to_string(), sign, zx_angle_rad },
            duration_s,
        )
    }

    pub fn pulses(pulses: Vec<Pulse>, duration_s: f64) -> Result<Self> {
        Self::checked(SegmentKind::Pulses { pulses }, duration_s)
    }

    pub fn idle(duration_s: f64) -> Result<Self> {
        Self::checked(SegmentKind::Idle, duration_s)
    }

    fn checked(kind: SegmentKind, duration_s: f64) -> Result<Self> {
        if duration_s < 0.0 || !duration_s.is_finite() {
            return Err(Error::NegativeDuration(duration_s));
        }
        Ok(Self { kind, duration_s })
    }
}

/// An ordered sequence of segments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, segment: Segment) {
        self.segments.push(segment);
    }

    pub fn extend(&mut self, other: PulseSchedule) {
        self.segments.extend(other.segments);
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Sum of segment durations in seconds.
    pub fn total_duration_s(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_s).sum()
    }

    /// Total CR-on time in seconds, ignoring signs.
    pub fn cr_on_s(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| matches!(s.kind, SegmentKind::CrDrive { .. }))
            .map(|s| s.duration_s)
            .sum()
    }

    /// Export as a JSON-lines timeline, one segment per line with its start
    /// time, duration, kind, involved qubits, and drive sign.
    pub fn to_json_lines(&self, device: &DeviceModel) -> Result<String> {
        #[derive(Serialize)]
        struct Row<'a> {
            start_s: f64,
            duration_s: f64,
            kind: &'static str,
            qubits: Vec<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            sign: Option<i8>,
            #[serde(skip_serializing_if = "Option::is_none")]
            gate: Option<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            pulses: Option<&'a [Pulse]>,
        }
        let mut out = String::new();
        let mut start = 0.0;
        for segment in &self.segments {
            let row = match &segment.kind {
                SegmentKind::CrDrive { gate, sign, .. } => {
                    let spec = device.gate(gate)?;
                    Row {
                        start_s: start,
                        duration_s: segment.duration_s,
                        kind: "cr_drive",
                        qubits: vec![&spec.control, &spec.target],
                        sign: Some(*sign),
                        gate: Some(gate),
                        pulses: None,
                    }
                }
                SegmentKind::Pulses { pulses } => Row {
                    start_s: start,
                    duration_s: segment.duration_s,
                    kind: "pulses",
                    qubits: pulses.iter().map(|p| p.qubit.as_str()).collect(),
                    sign: None,
                    gate: None,
                    pulses: Some(pulses),
                },
                SegmentKind::Idle => Row {
                    start_s: start,
                    duration_s: segment.duration_s,
                    kind: "idle",
                    qubits: Vec::new(),
                    sign: None,
                    gate: None,
                    pulses: None,
                },
            };
            out.push_str(&serde_json::to_string(&row).expect("schedule row serializes"));
            out.push('\n');
            start += segment.duration_s;
        }
        Ok(out)
    }
}
