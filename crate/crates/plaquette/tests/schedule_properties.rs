//! Schedule-level properties: exact CNOT compilation in every direction and
//! variant, and three-way agreement between the echo-frame bookkeeping, the
//! unitary builder, and the density matrix executor.

use nalgebra::DMatrix;
use num_complex::Complex64;
use plaquette::schedule::{rotation_matrix, schedule_unitary, unitary_distance_up_to_phase};
use plaquette::{
    build_cnot, build_ecr_2pulse, build_ecr_4pulse, default_plaquette, frame_report,
    simulate_schedule, AlphaTable, CRGateSpec, DensityMatrix, DriveParity, EcrVariant,
    NoiseToggles, Pulse, PulseSchedule, StateVector,
};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

const GATES: [&str; 4] = ["CR1", "CR2", "CR3", "CR4"];

/// Register order used throughout: control, target, then the spectators in
/// device order, so the frame maps to register positions [0, 2, 3, 4].
fn layout_of(gate: &CRGateSpec) -> Vec<&str> {
    let mut layout = vec![gate.control.as_str(), gate.target.as_str()];
    layout.extend(gate.spectators.iter().map(String::as_str));
    layout
}

fn bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

fn cnot_full(control: usize, target: usize, n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |i, j| {
        let flipped = if bit(j, control, n) == 1 { j ^ (1 << (n - 1 - target)) } else { j };
        if i == flipped { Complex64::new(1.0, 0.0) } else { Complex64::default() }
    })
}

/// exp(-i pi/4 Z(control) X(target)) embedded in an n-qubit register.
fn zx90_full(control: usize, target: usize, n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(FRAC_PI_4.cos(), 0.0)
        } else if i == (j ^ (1 << (n - 1 - target))) {
            let sign = if bit(j, control, n) == 0 { 1.0 } else { -1.0 };
            Complex64::new(0.0, -FRAC_PI_4.sin() * sign)
        } else {
            Complex64::default()
        }
    })
}

fn apply_pulse_full(u: DMatrix<Complex64>, pulse: &Pulse, layout: &[&str]) -> DMatrix<Complex64> {
    let r = rotation_matrix(pulse.axis, pulse.angle);
    let pos = layout.iter().position(|q| *q == pulse.qubit).unwrap();
    let mut full = DMatrix::<Complex64>::identity(1, 1);
    for q in 0..layout.len() {
        let factor = if q == pos {
            DMatrix::from_fn(2, 2, |i, j| r[(i, j)])
        } else {
            DMatrix::identity(2, 2)
        };
        full = full.kronecker(&factor);
    }
    full * u
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn frame_label(mask: usize) -> String {
    (0..4).map(|p| if (mask >> (3 - p)) & 1 == 1 { 'Z' } else { 'I' }).collect()
}

#[test]
fn every_cnot_direction_and_variant_is_exact() {
    let device = default_plaquette();
    for name in GATES {
        let gate = device.gate(name).unwrap();
        let layout = layout_of(gate);
        let n = layout.len();
        for variant in [EcrVariant::TwoPulse, EcrVariant::FourPulse] {
            for desired in [gate.control.as_str(), gate.target.as_str()] {
                let other = if desired == gate.control { &gate.target } else { &gate.control };
                let schedule = build_cnot(gate, desired, variant, &device).unwrap();
                let u = schedule_unitary(&schedule, &layout, &device, false).unwrap();
                let c_pos = layout.iter().position(|q| *q == desired).unwrap();
                let t_pos = layout.iter().position(|q| *q == other.as_str()).unwrap();
                let expected = cnot_full(c_pos, t_pos, n);
                let distance = unitary_distance_up_to_phase(&u, &expected);
                assert!(
                    distance < 1e-9,
                    "{name} {variant:?} with control {desired}: distance {distance:.3e}"
                );
            }
        }
    }
}

#[test]
fn every_echoed_cr_composes_to_zx90() {
    let device = default_plaquette();
    let slot = device.single_qubit_gate_duration_s;
    for name in GATES {
        let gate = device.gate(name).unwrap();

        let four = build_ecr_4pulse(gate, slot).unwrap();
        assert!(four.residual_correction.is_empty(), "{name} 4-pulse needs no correction");
        let layout = layout_of(gate);
        let u4 = schedule_unitary(&four.schedule, &layout, &device, false).unwrap();
        let d4 = unitary_distance_up_to_phase(&u4, &zx90_full(0, 1, layout.len()));
        assert!(d4 < 1e-9, "{name} 4-pulse distance {d4:.3e}");

        let two = build_ecr_2pulse(gate, slot).unwrap();
        let pair = [gate.control.as_str(), gate.target.as_str()];
        let mut u2 = schedule_unitary(&two.schedule, &pair, &device, false).unwrap();
        for pulse in &two.residual_correction {
            u2 = apply_pulse_full(u2, pulse, &pair);
        }
        let d2 = unitary_distance_up_to_phase(&u2, &zx90_full(0, 1, 2));
        assert!(d2 < 1e-9, "{name} 2-pulse distance {d2:.3e}");
    }
}

fn alpha_entries() -> impl Strategy<Value = Vec<(usize, f64, bool)>> {
    prop::collection::vec(
        (
            (1usize..16).prop_filter("control-only strings stay zero", |m| *m != 8),
            -2.0e6..2.0e6f64,
            any::<bool>(),
        ),
        1..8,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The crosstalk phases a schedule imprints are exactly the frame
    /// report's signed exposures: U(with crosstalk) equals U(without)
    /// times a diagonal built from the reported coefficients, applied
    /// before the schedule.
    #[test]
    fn crosstalk_phases_match_the_frame_report(
        entries in alpha_entries(),
        gate_idx in 0usize..4,
    ) {
        let mut device = default_plaquette();
        let slot = device.single_qubit_gate_duration_s;
        let gate_pos =
            device.cr_gates.iter().position(|g| g.name == GATES[gate_idx]).unwrap();
        {
            let gate = &mut device.cr_gates[gate_pos];
            let mut table = AlphaTable::new(4);
            gate.parity_tags.clear();
            for (mask, value_hz, odd) in &entries {
                let label = frame_label(*mask);
                table.set(&label, *value_hz);
                if *odd {
                    gate.parity_tags.insert(label, DriveParity::Odd);
                }
            }
            gate.crosstalk = table;
        }
        let gate = device.gate(GATES[gate_idx]).unwrap().clone();
        let layout = layout_of(&gate);
        let n = layout.len();
        let frame_to_layout = [0usize, 2, 3, 4];

        let schedules: Vec<PulseSchedule> = vec![
            build_ecr_2pulse(&gate, slot).unwrap().schedule,
            build_ecr_4pulse(&gate, slot).unwrap().schedule,
            build_cnot(&gate, &gate.control, EcrVariant::TwoPulse, &device).unwrap(),
            build_cnot(&gate, &gate.control, EcrVariant::FourPulse, &device).unwrap(),
        ];
        for schedule in &schedules {
            let report = frame_report(schedule, &gate).unwrap();
            let u_plain = schedule_unitary(schedule, &layout, &device, false).unwrap();
            let u_ct = schedule_unitary(schedule, &layout, &device, true).unwrap();
            let dim = 1usize << n;
            let mut diag = DMatrix::<Complex64>::zeros(dim, dim);
            for b in 0..dim {
                let mut exposure = 0.0;
                for (label, alpha_hz) in &gate.crosstalk.values_hz {
                    let coeff = report.coefficient_s(label);
                    let mut parity = 0usize;
                    for (p, ch) in label.chars().enumerate() {
                        if ch == 'Z' {
                            parity ^= bit(b, frame_to_layout[p], n);
                        }
                    }
                    let sign = if parity == 0 { 1.0 } else { -1.0 };
                    exposure += alpha_hz * coeff * sign;
                }
                diag[(b, b)] = Complex64::from_polar(1.0, -TAU * exposure / 2.0);
            }
            let predicted = u_plain * diag;
            prop_assert!(
                max_abs_diff(&u_ct, &predicted) < 1e-9,
                "frame prediction off by {:.3e}",
                max_abs_diff(&u_ct, &predicted)
            );
        }
    }

    /// The density matrix executor and the unitary builder are the same
    /// map on noiseless schedules, crosstalk included, for both gate
    /// directions and both echo variants.
    #[test]
    fn the_density_executor_matches_the_schedule_unitary(
        angles in prop::collection::vec((0.0..PI, 0.0..TAU), 5),
        gate_idx in 0usize..4,
        four_pulse in any::<bool>(),
        reversed in any::<bool>(),
        crosstalk in any::<bool>(),
    ) {
        let device = default_plaquette();
        let gate = device.gate(GATES[gate_idx]).unwrap();
        let layout = layout_of(gate);
        let variant = if four_pulse { EcrVariant::FourPulse } else { EcrVariant::TwoPulse };
        let desired = if reversed { &gate.target } else { &gate.control };
        let schedule = build_cnot(gate, desired, variant, &device).unwrap();

        let kets: Vec<[Complex64; 2]> = angles
            .iter()
            .map(|(theta, phi)| {
                [
                    Complex64::new((theta / 2.0).cos(), 0.0),
                    Complex64::from_polar((theta / 2.0).sin(), *phi),
                ]
            })
            .collect();
        let mut rho = DensityMatrix::from_product(&kets).unwrap();
        let toggles = NoiseToggles { crosstalk, decoherence: false };
        simulate_schedule(&mut rho, &schedule, &layout, &device, toggles).unwrap();

        let u = schedule_unitary(&schedule, &layout, &device, crosstalk).unwrap();
        let rho0 = StateVector::from_product(&kets).unwrap().to_density();
        let expected = &u * rho0.matrix() * u.adjoint();
        prop_assert!(
            max_abs_diff(rho.matrix(), &expected) < 1e-10,
            "executor deviates by {:.3e}",
            max_abs_diff(rho.matrix(), &expected)
        );
    }
}
