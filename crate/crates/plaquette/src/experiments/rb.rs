//! Randomized benchmarking: single-qubit, simultaneous five-qubit, and
//! two-qubit RB over the CNOT compiled from a CR gate.
//!
//! Each sequence applies random Cliffords followed by the exact group
//! inverse, so the noiseless survival is one and noise shows up as an
//! exponential decay in sequence length. Optionally a depolarizing channel
//! of known average infidelity r is injected after every random Clifford,
//! which makes the expected decay parameter p = 1 - r d / (d - 1) exactly
//! and gives the fitter a ground truth to be checked against.

use crate::analysis::{fit_rb_decay, RbFit};
use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::experiments::clifford::{tables, CliffordTables, Tableau2, TwoQubitClifford};
use crate::experiments::NoiseSwitches;
use crate::qsim::{idle_noise, ket0, DensityMatrix};
use crate::rng::SeedStream;
use crate::schedule::{
    build_cnot, simulate_schedule, EcrVariant, NoiseToggles, PulseSchedule, Segment, SegmentKind,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

/// Which register the benchmark drives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RbKind {
    /// One qubit benchmarked alone.
    Single { qubit: String },
    /// Every device qubit benchmarked at once with independent sequences.
    /// With no CR tone on, qubits do not couple, so the joint experiment
    /// factorizes exactly into per-qubit runs.
    Simultaneous,
    /// Two-qubit RB over the CNOT built from the named CR gate. The
    /// register is (control, target); the benchmark exercises the echoed
    /// CR schedules in both directions.
    TwoQubit { gate: String, variant: EcrVariant },
}

/// Run parameters shared by every RB flavor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbConfig {
    /// Sequence lengths (number of random Cliffords), strictly ascending.
    pub lengths: Vec<usize>,
    /// Random sequences drawn per length.
    pub n_sequences: usize,
    /// Shots per sequence.
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseSwitches,
    /// Average gate infidelity of a depolarizing channel injected after
    /// every random Clifford; None injects nothing.
    pub injected_depolarizing: Option<f64>,
}

impl RbConfig {
    pub fn new(lengths: Vec<usize>, seed: u64) -> Self {
        Self {
            lengths,
            n_sequences: 30,
            shots: 1000,
            seed,
            noise: NoiseSwitches::all(),
            injected_depolarizing: None,
        }
    }
}

/// Fit for one benchmarked register.
#[derive(Debug, Clone, Serialize)]
pub struct RbRegisterResult {
    /// Qubit label, or "control,target" for a two-qubit register.
    pub register: String,
    pub fit: RbFit,
}

/// Full output of an RB run.
#[derive(Debug, Clone, Serialize)]
pub struct RbReport {
    pub kind: RbKind,
    pub lengths: Vec<usize>,
    pub n_sequences: usize,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseSwitches,
    pub injected_depolarizing: Option<f64>,
    pub registers: Vec<RbRegisterResult>,
}

fn validate_config(config: &RbConfig, dimension: usize) -> Result<()> {
    if config.lengths.len() < 2 {
        return Err(Error::BadConfig(format!(
            "RB needs at least 2 sequence lengths, got {}",
            config.lengths.len()
        )));
    }
    for pair in config.lengths.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::BadConfig(format!(
                "RB lengths must be strictly ascending, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if config.lengths[0] < 1 {
        return Err(Error::BadConfig("RB lengths must be at least 1".into()));
    }
    if config.n_sequences < 2 {
        return Err(Error::BadConfig(format!(
            "RB needs at least 2 sequences per length, got {}",
            config.n_sequences
        )));
    }
    if config.shots < 1 {
        return Err(Error::BadConfig("RB needs at least 1 shot".into()));
    }
    if let Some(r) = config.injected_depolarizing {
        let lambda = r * dimension as f64 / (dimension - 1) as f64;
        if !r.is_finite() || !(0.0..=1.0).contains(&lambda) {
            return Err(Error::BadConfig(format!(
                "injected infidelity {r} maps to depolarizing strength {lambda} outside [0, 1]"
            )));
        }
    }
    Ok(())
}

/// Mix `state` with the maximally mixed state: rho -> (1 - lambda) rho +
/// lambda I / d.
fn depolarize(state: &mut DensityMatrix, lambda: f64) -> Result<()> {
    let d = 1usize << state.n_qubits();
    let mixed = state.matrix() * Complex64::new(1.0 - lambda, 0.0)
        + DMatrix::<Complex64>::identity(d, d) * Complex64::new(lambda / d as f64, 0.0);
    *state = DensityMatrix::from_matrix(mixed)?;
    Ok(())
}

/// Drop pulses addressed to qubits outside the register, keeping every
/// segment's duration. The 4-pulse echo plays spectator pulses that act
/// trivially on the benchmarked pair once crosstalk is off, but they would
/// otherwise force the simulation onto the full device register.
fn restrict_to_register(schedule: PulseSchedule, register: &[&str]) -> PulseSchedule {
    let segments = schedule
        .segments
        .into_iter()
        .map(|mut seg| {
            if let SegmentKind::Pulses { pulses } = &mut seg.kind {
                pulses.retain(|p| register.contains(&p.qubit.as_str()));
                if pulses.is_empty() {
                    return Segment { kind: SegmentKind::Idle, duration_s: seg.duration_s };
                }
            }
            seg
        })
        .collect();
    PulseSchedule { segments }
}

/// Probability of reading 0 on `label` given the true bit, folding in the
/// qubit's assignment errors.
fn read_zero(device: &DeviceModel, label: &str, bit: usize) -> Result<f64> {
    let q = device.qubit(label)?;
    Ok(if bit == 0 { 1.0 - q.readout_p10 } else { q.readout_p01 })
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One register's worth of single-qubit RB. Job numbering strides by the
/// register count so simultaneous runs give every register an independent
/// stream; a lone run uses stride 1, offset 0.
fn run_single_register(
    qubit: &str,
    config: &RbConfig,
    device: &DeviceModel,
    stride: u64,
    offset: u64,
) -> Result<RbFit> {
    let t = tables();
    let seeds = SeedStream::new(config.seed);
    let slot = device.single_qubit_gate_duration_s;
    let params = device.qubit(qubit)?;
    let lambda = config.injected_depolarizing.map(|r| 2.0 * r);
    let idle = [(0usize, qubit)];

    let mut means = Vec::with_capacity(config.lengths.len());
    let mut ses = Vec::with_capacity(config.lengths.len());
    for (li, &length) in config.lengths.iter().enumerate() {
        let mut survivals = Vec::with_capacity(config.n_sequences);
        for s in 0..config.n_sequences {
            let job = (li * config.n_sequences + s) as u64 * stride + offset;
            let mut rng = seeds.job(job);
            let mut state = DensityMatrix::from_product(&[ket0()])?;
            let mut acc = DMatrix::<Complex64>::identity(2, 2);
            for _ in 0..length {
                let idx: usize = rng.gen_range(0..24);
                let m = &t.one_qubit()[idx].matrix;
                state.apply_unitary(m, &[0])?;
                if config.noise.decoherence {
                    idle_noise(&mut state, &idle, slot, device)?;
                }
                if let Some(l) = lambda {
                    depolarize(&mut state, l)?;
                }
                acc = m * acc;
            }
            state.apply_unitary(&acc.adjoint(), &[0])?;
            if config.noise.decoherence {
                idle_noise(&mut state, &idle, slot, device)?;
            }
            let p0 = state.probabilities()[0];
            let p_obs = if config.noise.assignment {
                p0 * (1.0 - params.readout_p10) + (1.0 - p0) * params.readout_p01
            } else {
                p0
            };
            let hits = Binomial::new(config.shots, p_obs.clamp(0.0, 1.0))
                .map_err(|e| Error::BadConfig(format!("binomial sampling: {e}")))?
                .sample(&mut rng);
            survivals.push(hits as f64 / config.shots as f64);
        }
        let (mean, se) = mean_and_se(&survivals);
        means.push(mean);
        ses.push(se);
    }
    fit_rb_decay(&config.lengths, &means, &ses, 2)
}

/// Apply one decomposed two-qubit Clifford to the register, with the class
/// entangler realized as scheduled CNOTs.
#[allow(clippy::too_many_arguments)]
fn apply_two_qubit_clifford(
    state: &mut DensityMatrix,
    e: &TwoQubitClifford,
    t: &CliffordTables,
    native: &PulseSchedule,
    reversed: &PulseSchedule,
    layout: &[&str],
    device: &DeviceModel,
    noise: NoiseToggles,
    slot: f64,
) -> Result<()> {
    let idle = [(0usize, layout[0]), (1usize, layout[1])];
    let local_layer =
        |state: &mut DensityMatrix, pair: (usize, usize)| -> Result<()> {
            state.apply_unitary(&t.one_qubit()[pair.0].matrix, &[0])?;
            state.apply_unitary(&t.one_qubit()[pair.1].matrix, &[1])?;
            if noise.decoherence {
                idle_noise(state, &idle, slot, device)?;
            }
            Ok(())
        };
    local_layer(state, e.r)?;
    match e.class {
        0 => {}
        1 => simulate_schedule(state, native, layout, device, noise)?,
        2 => {
            simulate_schedule(state, native, layout, device, noise)?;
            state.apply_unitary(&t.hadamard, &[0])?;
            state.apply_unitary(&t.hadamard, &[1])?;
            if noise.decoherence {
                idle_noise(state, &idle, slot, device)?;
            }
            simulate_schedule(state, native, layout, device, noise)?;
        }
        _ => {
            simulate_schedule(state, native, layout, device, noise)?;
            simulate_schedule(state, reversed, layout, device, noise)?;
            simulate_schedule(state, native, layout, device, noise)?;
        }
    }
    local_layer(state, e.l)?;
    Ok(())
}

fn run_two_qubit(
    gate: &str,
    variant: EcrVariant,
    config: &RbConfig,
    device: &DeviceModel,
) -> Result<RbFit> {
    let t = tables();
    let spec = device.gate(gate)?;
    let control = spec.control.clone();
    let target = spec.target.clone();
    let layout: [&str; 2] = [&control, &target];
    // The echoed CR schedules cancel every control-involving crosstalk
    // string, and strings on spectators alone act as the identity on the
    // (control, target) register, so crosstalk is switched off here rather
    // than simulated on a larger register.
    let noise = NoiseToggles { crosstalk: false, decoherence: config.noise.decoherence };
    let native = restrict_to_register(build_cnot(spec, &spec.control, variant, device)?, &layout);
    let reversed = restrict_to_register(build_cnot(spec, &spec.target, variant, device)?, &layout);
    let slot = device.single_qubit_gate_duration_s;
    let lambda = config.injected_depolarizing.map(|r| r * 4.0 / 3.0);
    let seeds = SeedStream::new(config.seed);

    let mut means = Vec::with_capacity(config.lengths.len());
    let mut ses = Vec::with_capacity(config.lengths.len());
    for (li, &length) in config.lengths.iter().enumerate() {
        let mut survivals = Vec::with_capacity(config.n_sequences);
        for s in 0..config.n_sequences {
            let job = (li * config.n_sequences + s) as u64;
            let mut rng = seeds.job(job);
            let mut state = DensityMatrix::from_product(&[ket0(), ket0()])?;
            let mut total = Tableau2::identity();
            for _ in 0..length {
                let e = t.sample(&mut rng);
                apply_two_qubit_clifford(
                    &mut state, &e, t, &native, &reversed, &layout, device, noise, slot,
                )?;
                if let Some(l) = lambda {
                    depolarize(&mut state, l)?;
                }
                total = t.element_tableau(&e).compose_after(&total);
            }
            let recovery = t.compile(&total.inverse());
            apply_two_qubit_clifford(
                &mut state, &recovery, t, &native, &reversed, &layout, device, noise, slot,
            )?;
            let probs = state.probabilities();
            let p_obs = if config.noise.assignment {
                let mut acc = 0.0;
                for (idx, p) in probs.iter().enumerate() {
                    acc += p
                        * read_zero(device, &control, idx >> 1)?
                        * read_zero(device, &target, idx & 1)?;
                }
                acc
            } else {
                probs[0]
            };
            let hits = Binomial::new(config.shots, p_obs.clamp(0.0, 1.0))
                .map_err(|e| Error::BadConfig(format!("binomial sampling: {e}")))?
                .sample(&mut rng);
            survivals.push(hits as f64 / config.shots as f64);
        }
        let (mean, se) = mean_and_se(&survivals);
        means.push(mean);
        ses.push(se);
    }
    fit_rb_decay(&config.lengths, &means, &ses, 4)
}

/// Run randomized benchmarking and fit every register's decay.
pub fn run_rb(kind: &RbKind, config: &RbConfig, device: &DeviceModel) -> Result<RbReport> {
    let registers = match kind {
        RbKind::Single { qubit } => {
            validate_config(config, 2)?;
            device.qubit(qubit)?;
            vec![RbRegisterResult {
                register: qubit.clone(),
                fit: run_single_register(qubit, config, device, 1, 0)?,
            }]
        }
        RbKind::Simultaneous => {
            validate_config(config, 2)?;
            let labels: Vec<String> =
                device.qubit_labels().iter().map(|l| l.to_string()).collect();
            let stride = labels.len() as u64;
            labels
                .iter()
                .enumerate()
                .map(|(i, label)| {
                    Ok(RbRegisterResult {
                        register: label.clone(),
                        fit: run_single_register(label, config, device, stride, i as u64)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        RbKind::TwoQubit { gate, variant } => {
            validate_config(config, 4)?;
            let spec = device.gate(gate)?;
            vec![RbRegisterResult {
                register: format!("{},{}", spec.control, spec.target),
                fit: run_two_qubit(gate, *variant, config, device)?,
            }]
        }
    };
    Ok(RbReport {
        kind: kind.clone(),
        lengths: config.lengths.clone(),
        n_sequences: config.n_sequences,
        shots: config.shots,
        seed: config.seed,
        noise: config.noise,
        injected_depolarizing: config.injected_depolarizing,
        registers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::default_plaquette;

    fn quiet(config: &mut RbConfig) {
        config.noise = NoiseSwitches::none();
    }

    #[test]
    fn noiseless_single_qubit_rb_is_flat_at_one() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 8, 32], 11);
        quiet(&mut config);
        config.n_sequences = 4;
        config.shots = 200;
        let report =
            run_rb(&RbKind::Single { qubit: "D1".into() }, &config, &device).unwrap();
        let fit = &report.registers[0].fit;
        assert!(fit.degenerate);
        assert_eq!(fit.p, 1.0);
        assert_eq!(fit.average_gate_fidelity, 1.0);
        for s in &fit.survivals {
            assert_eq!(*s, 1.0);
        }
    }

    #[test]
    fn noiseless_two_qubit_rb_is_flat_at_one() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 3, 6], 13);
        quiet(&mut config);
        config.n_sequences = 3;
        config.shots = 150;
        let report = run_rb(
            &RbKind::TwoQubit { gate: "CR2".into(), variant: EcrVariant::TwoPulse },
            &config,
            &device,
        )
        .unwrap();
        let fit = &report.registers[0].fit;
        assert_eq!(report.registers[0].register, "D2,S1");
        assert!(fit.degenerate, "survivals {:?}", fit.survivals);
        assert_eq!(fit.p, 1.0);
    }

    #[test]
    fn injected_depolarizing_matches_the_fitted_decay_on_one_qubit() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 5, 10, 20, 40], 17);
        quiet(&mut config);
        config.injected_depolarizing = Some(0.01);
        config.n_sequences = 30;
        config.shots = 5000;
        let report =
            run_rb(&RbKind::Single { qubit: "D3".into() }, &config, &device).unwrap();
        let fit = &report.registers[0].fit;
        let expected_p = 1.0 - 0.01 * 2.0;
        assert!(
            (fit.p - expected_p).abs() < 2.0 * fit.p_se.max(5e-4),
            "fit p = {} +- {}, expected {}",
            fit.p,
            fit.p_se,
            expected_p
        );
    }

    #[test]
    fn injected_depolarizing_matches_the_fitted_decay_on_two_qubits() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 4, 8, 16], 19);
        quiet(&mut config);
        config.injected_depolarizing = Some(0.02);
        config.n_sequences = 15;
        config.shots = 4000;
        let report = run_rb(
            &RbKind::TwoQubit { gate: "CR1".into(), variant: EcrVariant::FourPulse },
            &config,
            &device,
        )
        .unwrap();
        let fit = &report.registers[0].fit;
        let expected_p = 1.0 - 0.02 * 4.0 / 3.0;
        assert!(
            (fit.p - expected_p).abs() < 3.0 * fit.p_se.max(1e-3),
            "fit p = {} +- {}, expected {}",
            fit.p,
            fit.p_se,
            expected_p
        );
    }

    #[test]
    fn decoherence_produces_a_real_decay() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 40, 120, 280], 23);
        config.noise = NoiseSwitches::none();
        config.noise.decoherence = true;
        config.n_sequences = 8;
        config.shots = 2000;
        let report =
            run_rb(&RbKind::Single { qubit: "S1".into() }, &config, &device).unwrap();
        let fit = &report.registers[0].fit;
        assert!(!fit.degenerate);
        assert!(fit.p > 0.9 && fit.p < 1.0, "p = {}", fit.p);
        assert!(fit.average_gate_fidelity > 0.95 && fit.average_gate_fidelity < 1.0);
    }

    #[test]
    fn simultaneous_rb_covers_every_qubit() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 6, 18], 29);
        quiet(&mut config);
        config.n_sequences = 3;
        config.shots = 100;
        let report = run_rb(&RbKind::Simultaneous, &config, &device).unwrap();
        assert_eq!(report.registers.len(), 5);
        let labels: Vec<&str> =
            report.registers.iter().map(|r| r.register.as_str()).collect();
        assert_eq!(labels, vec!["D1", "D2", "D3", "D4", "S1"]);
        for r in &report.registers {
            assert_eq!(r.fit.p, 1.0, "register {}", r.register);
        }
    }

    #[test]
    fn runs_are_seed_deterministic() {
        let device = default_plaquette();
        let mut config = RbConfig::new(vec![1, 4, 8, 16], 31);
        quiet(&mut config);
        config.noise.assignment = true;
        config.injected_depolarizing = Some(0.05);
        config.n_sequences = 4;
        config.shots = 400;
        let kind = RbKind::TwoQubit { gate: "CR4".into(), variant: EcrVariant::TwoPulse };
        let a = run_rb(&kind, &config, &device).unwrap();
        let b = run_rb(&kind, &config, &device).unwrap();
        assert_eq!(
            a.registers[0].fit.survivals,
            b.registers[0].fit.survivals
        );
        config.seed = 32;
        let c = run_rb(&kind, &config, &device).unwrap();
        assert_ne!(
            a.registers[0].fit.survivals,
            c.registers[0].fit.survivals
        );
    }

    #[test]
    fn bad_configurations_are_rejected() {
        let device = default_plaquette();
        let kind = RbKind::Single { qubit: "D1".into() };
        let mut config = RbConfig::new(vec![5], 1);
        assert!(run_rb(&kind, &config, &device).is_err());
        config.lengths = vec![5, 5];
        assert!(run_rb(&kind, &config, &device).is_err());
        config.lengths = vec![5, 2];
        assert!(run_rb(&kind, &config, &device).is_err());
        config.lengths = vec![2, 5];
        config.n_sequences = 1;
        assert!(run_rb(&kind, &config, &device).is_err());
        config.n_sequences = 2;
        config.injected_depolarizing = Some(0.9);
        assert!(run_rb(&kind, &config, &device).is_err());
        config.injected_depolarizing = None;
        let missing = RbKind::Single { qubit: "D9".into() };
        assert!(run_rb(&missing, &config, &device).is_err());
    }
}
