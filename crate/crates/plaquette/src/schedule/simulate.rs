//! Density-matrix execution of pulse schedules.

use crate::device::{CRGateSpec, DeviceModel, DriveParity};
use crate::error::{Error, Result};
use crate::qsim::{diagonal_frequencies, embed_full, idle_noise, DensityMatrix, Pauli, PauliString};
use crate::schedule::{rotation_matrix, PulseAxis, PulseSchedule, SegmentKind};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Which imperfections the executor applies on top of the coherent pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseToggles {
    /// Static Z-string crosstalk during CR segments.
    pub crosstalk: bool,
    /// Amplitude and phase damping on every register qubit for the wall
    /// clock duration of every segment.
    pub decoherence: bool,
}

impl NoiseToggles {
    pub fn none() -> Self {
        Self { crosstalk: false, decoherence: false }
    }

    pub fn all() -> Self {
        Self { crosstalk: true, decoherence: true }
    }
}

fn position_of(layout: &[&str], qubit: &str) -> Result<usize> {
    layout
        .iter()
        .position(|q| *q == qubit)
        .ok_or_else(|| Error::UnknownQubit(qubit.to_string()))
}

/// exp(−i zx_angle/2 · Z⊗X) on (control, target).
fn zx_matrix(zx_angle_rad: f64) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let c = Complex64::new((zx_angle_rad / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(zx_angle_rad / 2.0).sin());
    DMatrix::from_row_slice(
        4,
        4,
        &[c, s, zero, zero, s, c, zero, zero, zero, zero, c, -s, zero, zero, -s, c],
    )
}

fn rotation_full(axis: PulseAxis, angle: f64, qubit: usize, n: usize) -> DMatrix<Complex64> {
    let r = rotation_matrix(axis, angle);
    embed_full(&DMatrix::from_fn(2, 2, |i, j| r[(i, j)]), &[qubit], n)
}

/// Crosstalk Z-strings of `gate` mapped onto register positions, with odd
/// tagged couplings flipped by the drive sign. Every frame qubit must be in
/// the register for the string phases to be representable.
fn crosstalk_coeffs(
    gate: &CRGateSpec,
    drive_sign: i8,
    layout: &[&str],
) -> Result<Vec<(PauliString, f64)>> {
    let frame = gate.frame_labels();
    let positions: Vec<usize> =
        frame.iter().map(|q| position_of(layout, q)).collect::<Result<_>>()?;
    let mut coeffs = Vec::new();
    for (label, &value_hz) in &gate.crosstalk.values_hz {
        if value_hz == 0.0 {
            continue;
        }
        let mut ops = vec![Pauli::I; layout.len()];
        for (pos, ch) in label.chars().enumerate() {
            if ch == 'Z' {
                ops[positions[pos]] = Pauli::Z;
            }
        }
        let signed = match gate.parity_tag(label) {
            DriveParity::Odd => value_hz * f64::from(drive_sign),
            DriveParity::Even => value_hz,
        };
        coeffs.push((PauliString::new(ops), signed));
    }
    Ok(coeffs)
}

/// Evolve `state` through `schedule` on the register `layout` (one label
/// per state qubit, position i of the register is qubit i of the state).
///
/// CR segments turn the ideal ZX rotation on the control-target pair and,
/// when enabled, the crosstalk phases over the gate frame; both the pair
/// and the full frame must then be in the register. Decoherence, when
/// enabled, acts on every register qubit for every segment's duration.
pub fn simulate_schedule(
    state: &mut DensityMatrix,
    schedule: &PulseSchedule,
    layout: &[&str],
    device: &DeviceModel,
    noise: NoiseToggles,
) -> Result<()> {
    let n = layout.len();
    if n != state.n_qubits() {
        return Err(Error::DimensionMismatch { got: state.n_qubits(), expected: n });
    }
    let idle_pairs: Vec<(usize, &str)> = layout.iter().copied().enumerate().collect();
    for segment in &schedule.segments {
        match &segment.kind {
            SegmentKind::CrDrive { gate, sign, zx_angle_rad } => {
                let spec = device.gate(gate)?;
                let control = position_of(layout, &spec.control)?;
                let target = position_of(layout, &spec.target)?;
                state.apply_unitary(&zx_matrix(*zx_angle_rad), &[control, target])?;
                if noise.crosstalk {
                    let coeffs = crosstalk_coeffs(spec, *sign, layout)?;
                    state.evolve_diagonal(&coeffs, segment.duration_s)?;
                }
            }
            SegmentKind::Pulses { pulses } => {
                for pulse in pulses {
                    let qubit = position_of(layout, &pulse.qubit)?;
                    let r = rotation_matrix(pulse.axis, pulse.angle);
                    state.apply_unitary(&DMatrix::from_fn(2, 2, |i, j| r[(i, j)]), &[qubit])?;
                }
            }
            SegmentKind::Idle => {}
        }
        if noise.decoherence && segment.duration_s > 0.0 {
            idle_noise(state, &idle_pairs, segment.duration_s, device)?;
        }
    }
    Ok(())
}

/// The total unitary of a schedule on `layout`, with or without the
/// coherent crosstalk phases. Decoherence has no unitary representation
/// and is never included.
pub fn schedule_unitary(
    schedule: &PulseSchedule,
    layout: &[&str],
    device: &DeviceModel,
    include_crosstalk: bool,
) -> Result<DMatrix<Complex64>> {
    let n = layout.len();
    let dim = 1usize << n;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for segment in &schedule.segments {
        match &segment.kind {
            SegmentKind::CrDrive { gate, sign, zx_angle_rad } => {
                let spec = device.gate(gate)?;
                let control = position_of(layout, &spec.control)?;
                let target = position_of(layout, &spec.target)?;
                u = embed_full(&zx_matrix(*zx_angle_rad), &[control, target], n) * u;
                if include_crosstalk {
                    let coeffs = crosstalk_coeffs(spec, *sign, layout)?;
                    let freqs = diagonal_frequencies(&coeffs, n)?;
                    let phases = DVector::from_iterator(
                        dim,
                        freqs
                            .iter()
                            .map(|f| Complex64::from_polar(1.0, -TAU * f * segment.duration_s)),
                    );
                    u = DMatrix::from_diagonal(&phases) * u;
                }
            }
            SegmentKind::Pulses { pulses } => {
                for pulse in pulses {
                    let qubit = position_of(layout, &pulse.qubit)?;
                    u = rotation_full(pulse.axis, pulse.angle, qubit, n) * u;
                }
            }
            SegmentKind::Idle => {}
        }
    }
    Ok(u)
}

/// Max elementwise deviation between `a` and `b` after aligning their
/// global phases.
pub fn unitary_distance_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "comparing matrices of different shapes");
    let overlap = (b.adjoint() * a).trace();
    let phase = if overlap.norm() > 1e-12 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a - b * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
