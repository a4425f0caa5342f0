//! Builders for echoed cross-resonance sequences and direction-corrected
//! CNOTs.

use crate::device::{CRGateSpec, DeviceModel};
use crate::error::{Error, Result};
use crate::schedule::{Pulse, PulseAxis, PulseSchedule, Segment};
use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which echo decomposition a two-qubit gate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EcrVariant {
    TwoPulse,
    FourPulse,
}

/// An echoed CR sequence plus the single-qubit pulses that, applied after
/// it, complete the exact ZX_90.
#[derive(Debug, Clone)]
pub struct EchoedCr {
    pub schedule: PulseSchedule,
    /// Empty when the sequence already composes to ZX_90.
    pub residual_correction: Vec<Pulse>,
}

/// exp(−i angle/2 · σ_axis).
pub fn rotation_matrix(axis: PulseAxis, angle: f64) -> Matrix2<Complex64> {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match axis {
        PulseAxis::X => Matrix2::new(re(c), im(-s), im(-s), re(c)),
        PulseAxis::Y => Matrix2::new(re(c), re(-s), re(s), re(c)),
        PulseAxis::Z => Matrix2::new(Complex64::from_polar(1.0, -angle / 2.0), re(0.0), re(0.0), Complex64::from_polar(1.0, angle / 2.0)),
    }
}

/// The 2-pulse echo: CR(+45°), π on the control, CR(−45°). The composition
/// equals X on the control times ZX_90, so the reported correction is one
/// more control π pulse.
pub fn build_ecr_2pulse(gate: &CRGateSpec, slot_s: f64) -> Result<EchoedCr> {
    let t = gate.segment_duration_2pulse_s;
    let mut schedule = PulseSchedule::new();
    schedule.push(Segment::cr_drive(&gate.name, 1, PI / 4.0, t)?);
    schedule.push(Segment::pulses(vec![Pulse::new(&gate.control, PulseAxis::X, PI)], slot_s)?);
    schedule.push(Segment::cr_drive(&gate.name, -1, -PI / 4.0, t)?);
    Ok(EchoedCr {
        schedule,
        residual_correction: vec![Pulse::new(&gate.control, PulseAxis::X, PI)],
    })
}

/// The 4-pulse echo: two half-angle 2-pulse cores with π pulses on every
/// spectator between and after them. Segment drive signs are (+, −, −, +)
/// with 22.5° of ZX each, composing to ZX_90 exactly; the closing spectator
/// echo restores every spectator frame, so there is no residual.
pub fn build_ecr_4pulse(gate: &CRGateSpec, slot_s: f64) -> Result<EchoedCr> {
    let t = gate.segment_duration_4pulse_s;
    let a = PI / 8.0;
    let control_echo =
        |sched: &mut PulseSchedule| -> Result<()> {
            sched.push(Segment::pulses(
                vec![Pulse::new(&gate.control, PulseAxis::X, PI)],
                slot_s,
            )?);
            Ok(())
        };
    let spectator_echo = |sched: &mut PulseSchedule| -> Result<()> {
        let pulses = gate
            .spectators
            .iter()
            .map(|q| Pulse::new(q, PulseAxis::X, PI))
            .collect();
        sched.push(Segment::pulses(pulses, slot_s)?);
        Ok(())
    };
    let mut schedule = PulseSchedule::new();
    schedule.push(Segment::cr_drive(&gate.name, 1, a, t)?);
    control_echo(&mut schedule)?;
    schedule.push(Segment::cr_drive(&gate.name, -1, -a, t)?);
    spectator_echo(&mut schedule)?;
    schedule.push(Segment::cr_drive(&gate.name, -1, -a, t)?);
    control_echo(&mut schedule)?;
    schedule.push(Segment::cr_drive(&gate.name, 1, a, t)?);
    spectator_echo(&mut schedule)?;
    Ok(EchoedCr { schedule, residual_correction: Vec::new() })
}

fn build_echo(gate: &CRGateSpec, variant: EcrVariant, slot_s: f64) -> Result<EchoedCr> {
    match variant {
        EcrVariant::TwoPulse => build_ecr_2pulse(gate, slot_s),
        EcrVariant::FourPulse => build_ecr_4pulse(gate, slot_s),
    }
}

/// Hadamard on each listed qubit, decomposed as Rz(π/2)·Rx(π/2)·Rz(π/2)
/// with virtual (zero-duration) Z segments around one shared X slot.
pub fn hadamard_wrap_segments(qubits: &[&str], slot_s: f64) -> Result<Vec<Segment>> {
    let z_layer = || -> Result<Segment> {
        Segment::pulses(
            qubits.iter().map(|q| Pulse::new(q, PulseAxis::Z, PI / 2.0)).collect(),
            0.0,
        )
    };
    let x_layer = Segment::pulses(
        qubits.iter().map(|q| Pulse::new(q, PulseAxis::X, PI / 2.0)).collect(),
        slot_s,
    )?;
    Ok(vec![z_layer()?, x_layer, z_layer()?])
}

/// A CNOT built from the chosen echo variant. The native decomposition is
/// Rz(−π/2) on the control, Rx(−π/2) on the target, and ZX_90 (all three
/// commute); when `desired_control` opposes the native CR direction the
/// whole gate is conjugated by Hadamards on both participating qubits.
pub fn build_cnot(
    gate: &CRGateSpec,
    desired_control: &str,
    variant: EcrVariant,
    device: &DeviceModel,
) -> Result<PulseSchedule> {
    let slot = device.single_qubit_gate_duration_s;
    let reversed = if desired_control == gate.control {
        false
    } else if desired_control == gate.target {
        true
    } else {
        return Err(Error::QubitNotInGate {
            gate: gate.name.clone(),
            qubit: desired_control.to_string(),
        });
    };

    let mut schedule = PulseSchedule::new();
    let pair = [gate.control.as_str(), gate.target.as_str()];
    if reversed {
        schedule.segments.extend(hadamard_wrap_segments(&pair, slot)?);
    }
    schedule.push(Segment::pulses(
        vec![Pulse::new(&gate.target, PulseAxis::X, -PI / 2.0)],
        slot,
    )?);
    let echo = build_echo(gate, variant, slot)?;
    schedule.extend(echo.schedule);
    if !echo.residual_correction.is_empty() {
        schedule.push(Segment::pulses(echo.residual_correction, slot)?);
    }
    schedule.push(Segment::pulses(
        vec![Pulse::new(&gate.control, PulseAxis::Z, -PI / 2.0)],
        0.0,
    )?);
    if reversed {
        schedule.segments.extend(hadamard_wrap_segments(&pair, slot)?);
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::default_plaquette;
    use crate::schedule::{schedule_unitary, unitary_distance_up_to_phase};
    use nalgebra::DMatrix;

    const C0: Complex64 = Complex64::new(0.0, 0.0);
    const C1: Complex64 = Complex64::new(1.0, 0.0);

    fn embed_rotation(axis: PulseAxis, angle: f64, qubit: usize, n: usize) -> DMatrix<Complex64> {
        let r = rotation_matrix(axis, angle);
        crate::qsim::embed_full(&DMatrix::from_fn(2, 2, |i, j| r[(i, j)]), &[qubit], n)
    }

    fn zx90() -> DMatrix<Complex64> {
        // cos(π/4) I − i sin(π/4) Z⊗X.
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let m = Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
        DMatrix::from_row_slice(
            4,
            4,
            &[c, m, C0, C0, m, c, C0, C0, C0, C0, c, -m, C0, C0, -m, c],
        )
    }

    fn cnot() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            4,
            4,
            &[C1, C0, C0, C0, C0, C1, C0, C0, C0, C0, C0, C1, C0, C0, C1, C0],
        )
    }

    fn cnot_reversed() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            4,
            4,
            &[C1, C0, C0, C0, C0, C0, C0, C1, C0, C0, C1, C0, C0, C1, C0, C0],
        )
    }

    #[test]
    fn ecr2_durations_match_published_totals() {
        let device = default_plaquette();
        let slot = device.single_qubit_gate_duration_s;
        let ecr = build_ecr_2pulse(device.gate("CR2").unwrap(), slot).unwrap();
        assert_eq!(ecr.schedule.len(), 3);
        assert!((ecr.schedule.total_duration_s() - 340e-9).abs() < 1e-15);
        let ecr4 = build_ecr_4pulse(device.gate("CR2").unwrap(), slot).unwrap();
        assert_eq!(ecr4.schedule.len(), 8);
        assert!((ecr4.schedule.total_duration_s() - 580e-9).abs() < 1e-15);
        for (gate, total2, total4) in
            [("CR1", 660e-9, 740e-9), ("CR3", 720e-9, 820e-9), ("CR4", 1010e-9, 940e-9)]
        {
            let spec = device.gate(gate).unwrap();
            let two = build_ecr_2pulse(spec, slot).unwrap().schedule.total_duration_s();
            let four = build_ecr_4pulse(spec, slot).unwrap().schedule.total_duration_s();
            assert!((two - total2).abs() < 1e-15, "{gate} 2-pulse total {two}");
            assert!((four - total4).abs() < 1e-15, "{gate} 4-pulse total {four}");
        }
    }

    #[test]
    fn ecr2_with_correction_is_zx90() {
        let device = default_plaquette();
        let gate = device.gate("CR1").unwrap();
        let ecr = build_ecr_2pulse(gate, device.single_qubit_gate_duration_s).unwrap();
        let layout = [gate.control.as_str(), gate.target.as_str()];
        let mut u = schedule_unitary(&ecr.schedule, &layout, &device, false).unwrap();
        for pulse in &ecr.residual_correction {
            let idx = layout.iter().position(|q| *q == pulse.qubit).unwrap();
            u = embed_rotation(pulse.axis, pulse.angle, idx, 2) * u;
        }
        assert!(unitary_distance_up_to_phase(&u, &zx90()) < 1e-9);
    }

    #[test]
    fn flipping_both_drive_signs_gives_minus_zx90() {
        let device = default_plaquette();
        let gate = device.gate("CR1").unwrap();
        let mut ecr = build_ecr_2pulse(gate, device.single_qubit_gate_duration_s).unwrap();
        for segment in &mut ecr.schedule.segments {
            if let crate::schedule::SegmentKind::CrDrive { sign, zx_angle_rad, .. } =
                &mut segment.kind
            {
                *sign = -*sign;
                *zx_angle_rad = -*zx_angle_rad;
            }
        }
        let layout = [gate.control.as_str(), gate.target.as_str()];
        let mut u = schedule_unitary(&ecr.schedule, &layout, &device, false).unwrap();
        for pulse in &ecr.residual_correction {
            let idx = layout.iter().position(|q| *q == pulse.qubit).unwrap();
            u = embed_rotation(pulse.axis, pulse.angle, idx, 2) * u;
        }
        assert!(unitary_distance_up_to_phase(&u, &zx90().adjoint()) < 1e-9);
    }

    #[test]
    fn ecr4_is_exactly_zx90_with_identity_spectators() {
        let device = default_plaquette();
        let gate = device.gate("CR3").unwrap();
        let ecr = build_ecr_4pulse(gate, device.single_qubit_gate_duration_s).unwrap();
        assert!(ecr.residual_correction.is_empty());
        let mut layout = vec![gate.control.as_str(), gate.target.as_str()];
        layout.extend(gate.spectators.iter().map(String::as_str));
        let u = schedule_unitary(&ecr.schedule, &layout, &device, false).unwrap();
        let expected = crate::qsim::embed_full(&zx90(), &[0, 1], 5);
        assert!(unitary_distance_up_to_phase(&u, &expected) < 1e-9);
    }

    #[test]
    fn cnot_matches_both_orientations() {
        let device = default_plaquette();
        let gate = device.gate("CR4").unwrap();
        // The 4-pulse echo touches the spectators, so compare in the full
        // five-qubit register with the ideal CNOT embedded on the pair.
        let mut layout = vec![gate.control.as_str(), gate.target.as_str()];
        layout.extend(gate.spectators.iter().map(String::as_str));
        let dim = 1 << layout.len();
        for variant in [EcrVariant::TwoPulse, EcrVariant::FourPulse] {
            let native = build_cnot(gate, &gate.control, variant, &device).unwrap();
            let u = schedule_unitary(&native, &layout, &device, false).unwrap();
            let expected = crate::qsim::embed_full(&cnot(), &[0, 1], layout.len());
            assert!(
                unitary_distance_up_to_phase(&u, &expected) < 1e-9,
                "native CNOT, {variant:?}"
            );
            let reversed = build_cnot(gate, &gate.target, variant, &device).unwrap();
            let v = schedule_unitary(&reversed, &layout, &device, false).unwrap();
            let expected = crate::qsim::embed_full(&cnot_reversed(), &[0, 1], layout.len());
            assert!(
                unitary_distance_up_to_phase(&v, &expected) < 1e-9,
                "reversed CNOT, {variant:?}"
            );
            let squared = &u * &u;
            assert!(
                unitary_distance_up_to_phase(&squared, &DMatrix::identity(dim, dim)) < 1e-8,
                "CNOT squared, {variant:?}"
            );
        }
    }

    #[test]
    fn cnot_rejects_foreign_control() {
        let device = default_plaquette();
        let gate = device.gate("CR1").unwrap();
        assert!(matches!(
            build_cnot(gate, "D2", EcrVariant::TwoPulse, &device),
            Err(Error::QubitNotInGate { .. })
        ));
    }

    #[test]
    fn hadamard_decomposition_is_correct() {
        let segs = hadamard_wrap_segments(&["Q"], 50e-9).unwrap();
        let mut u = Matrix2::identity();
        for seg in &segs {
            if let crate::schedule::SegmentKind::Pulses { pulses } = &seg.kind {
                for p in pulses {
                    u = rotation_matrix(p.axis, p.angle) * u;
                }
            }
        }
        let h = Matrix2::new(C1, C1, C1, -C1) / Complex64::new(2.0f64.sqrt(), 0.0);
        let u_dm = DMatrix::from_fn(2, 2, |i, j| u[(i, j)]);
        let h_dm = DMatrix::from_fn(2, 2, |i, j| h[(i, j)]);
        assert!(unitary_distance_up_to_phase(&u_dm, &h_dm) < 1e-12);
    }
}
