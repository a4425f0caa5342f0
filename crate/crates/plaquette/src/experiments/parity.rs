//! Weight-four parity checks: four sequential CNOT gates collect either the
//! ZZZZ or the XXXX parity of the data qubits onto the syndrome qubit.

use super::NoiseSwitches;
use crate::device::{CRGateSpec, DeviceModel};
use crate::error::{Error, Result};
use crate::qsim::{ket0, ket1, ket_minus, ket_plus, DensityMatrix};
use crate::rng::SeedStream;
use crate::schedule::{
    build_cnot, hadamard_wrap_segments, simulate_schedule, EcrVariant, NoiseToggles, PulseSchedule,
};
use num_complex::Complex64;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

/// Which stabilizer the circuit measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityBasis {
    Zzzz,
    Xxxx,
}

/// How the XXXX check is realized. Both are parity-equivalent without
/// noise; error propagation differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XxxxRealization {
    /// Hadamard-conjugate each data qubit around its CNOT; data qubits are
    /// prepared in |+>/|-> and the syndrome is measured in Z.
    DataConjugation,
    /// Prepare the syndrome in |+>, drive every CNOT with the syndrome as
    /// control, and close with a Hadamard on the syndrome.
    SyndromePlus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParityRunConfig {
    pub basis: ParityBasis,
    pub ecr_variant: EcrVariant,
    /// Shots per input state.
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseSwitches,
    /// Gates applied sequentially, in this order.
    pub gate_order: Vec<String>,
    pub xxxx_realization: XxxxRealization,
}

impl ParityRunConfig {
    pub fn new(basis: ParityBasis, ecr_variant: EcrVariant, seed: u64) -> Self {
        Self {
            basis,
            ecr_variant,
            shots: 20_000,
            seed,
            noise: NoiseSwitches::all(),
            gate_order: vec!["CR1".into(), "CR2".into(), "CR3".into(), "CR4".into()],
            xxxx_realization: XxxxRealization::DataConjugation,
        }
    }
}

/// One input state's scored outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ParityStateResult {
    /// Prepared data-qubit bits, first data qubit first. For XXXX a bit of
    /// 1 means |-> rather than |1>.
    pub bits: String,
    /// Ideal parity (XOR of the prepared bits).
    pub expected: u8,
    /// Sampled fraction of shots whose syndrome outcome matched `expected`.
    pub p_correct: f64,
    /// Binomial standard error sqrt(p(1-p)/shots).
    pub se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityResult {
    pub basis: ParityBasis,
    pub ecr_variant: EcrVariant,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseSwitches,
    pub gate_order: Vec<String>,
    pub syndrome: String,
    pub data_qubits: Vec<String>,
    pub states: Vec<ParityStateResult>,
    /// Mean of p_correct over all input states.
    pub p_correct_mean: f64,
    /// Sample standard deviation (n - 1) over input states.
    pub p_correct_std: f64,
    /// Standard error of the mean: std / sqrt(n_states).
    pub p_correct_se: f64,
}

/// The syndrome is the one qubit shared by every gate's (control, target)
/// pair; each gate's data qubit is its other pair member.
fn resolve_plaquette<'d>(
    gates: &[&'d CRGateSpec],
) -> Result<(String, Vec<&'d str>)> {
    if gates.len() < 2 {
        return Err(Error::BadConfig(
            "parity circuits need at least two gates to identify the syndrome qubit".into(),
        ));
    }
    let pair = |g: &CRGateSpec| [g.control.clone(), g.target.clone()];
    let mut shared: Vec<String> = pair(gates[0]).to_vec();
    for gate in &gates[1..] {
        let p = pair(gate);
        shared.retain(|q| p.contains(q));
    }
    if shared.len() != 1 {
        return Err(Error::BadConfig(format!(
            "expected exactly one qubit shared by all gates, found {shared:?}"
        )));
    }
    let syndrome = shared.remove(0);
    let mut data = Vec::with_capacity(gates.len());
    for gate in gates {
        let d = if gate.control == syndrome { gate.target.as_str() } else { gate.control.as_str() };
        if data.contains(&d) {
            return Err(Error::BadConfig(format!(
                "data qubit {d} appears in more than one gate"
            )));
        }
        data.push(d);
    }
    Ok((syndrome, data))
}

fn build_circuit(
    config: &ParityRunConfig,
    gates: &[&CRGateSpec],
    syndrome: &str,
    data: &[&str],
    device: &DeviceModel,
) -> Result<PulseSchedule> {
    let slot = device.single_qubit_gate_duration_s;
    let mut schedule = PulseSchedule::new();
    let conjugate_data = config.basis == ParityBasis::Xxxx
        && config.xxxx_realization == XxxxRealization::DataConjugation;
    let syndrome_control = config.basis == ParityBasis::Xxxx
        && config.xxxx_realization == XxxxRealization::SyndromePlus;
    for (gate, &data_qubit) in gates.iter().zip(data) {
        if conjugate_data {
            for segment in hadamard_wrap_segments(&[data_qubit], slot)? {
                schedule.push(segment);
            }
        }
        let control = if syndrome_control { syndrome } else { data_qubit };
        schedule.extend(build_cnot(gate, control, config.ecr_variant, device)?);
        if conjugate_data {
            for segment in hadamard_wrap_segments(&[data_qubit], slot)? {
                schedule.push(segment);
            }
        }
    }
    if syndrome_control {
        for segment in hadamard_wrap_segments(&[syndrome], slot)? {
            schedule.push(segment);
        }
    }
    Ok(schedule)
}

/// Run the parity check over every computational input state and score the
/// syndrome outcome against the ideal parity.
pub fn run_parity(config: &ParityRunConfig, device: &DeviceModel) -> Result<ParityResult> {
    if config.shots == 0 {
        return Err(Error::BadConfig("shots must be at least 1".into()));
    }
    let gates: Vec<&CRGateSpec> = config
        .gate_order
        .iter()
        .map(|name| device.gate(name))
        .collect::<Result<_>>()?;
    let (syndrome, data) = resolve_plaquette(&gates)?;
    let schedule = build_circuit(config, &gates, &syndrome, &data, device)?;

    let mut layout: Vec<&str> = data.clone();
    layout.push(syndrome.as_str());
    let syndrome_index = data.len();
    let n_states = 1usize << data.len();
    let toggles = NoiseToggles {
        crosstalk: config.noise.crosstalk,
        decoherence: config.noise.decoherence,
    };
    let syndrome_params = device.qubit(&syndrome)?;
    let seeds = SeedStream::new(config.seed);

    let syndrome_prep = if config.basis == ParityBasis::Xxxx
        && config.xxxx_realization == XxxxRealization::SyndromePlus
    {
        ket_plus()
    } else {
        ket0()
    };
    let data_kets: [[Complex64; 2]; 2] = match config.basis {
        ParityBasis::Zzzz => [ket0(), ket1()],
        ParityBasis::Xxxx => [ket_plus(), ket_minus()],
    };

    let mut states = Vec::with_capacity(n_states);
    for input in 0..n_states {
        let bit = |i: usize| (input >> (data.len() - 1 - i)) & 1;
        let mut preps: Vec<[Complex64; 2]> =
            (0..data.len()).map(|i| data_kets[bit(i)]).collect();
        preps.push(syndrome_prep);
        let mut state = DensityMatrix::from_product(&preps)?;
        simulate_schedule(&mut state, &schedule, &layout, device, toggles)?;

        let mut p_one = state.prob_one(syndrome_index)?;
        if config.noise.assignment {
            p_one = p_one * (1.0 - syndrome_params.readout_p01)
                + (1.0 - p_one) * syndrome_params.readout_p10;
        }
        let expected = (0..data.len()).fold(0u8, |acc, i| acc ^ bit(i) as u8);
        let p_correct_prob =
            (if expected == 1 { p_one } else { 1.0 - p_one }).clamp(0.0, 1.0);

        let mut rng = seeds.job(input as u64);
        let hits = Binomial::new(config.shots, p_correct_prob)
            .expect("probability is clamped to [0, 1]")
            .sample(&mut rng);
        let p_correct = hits as f64 / config.shots as f64;
        let se = (p_correct * (1.0 - p_correct) / config.shots as f64).sqrt();
        states.push(ParityStateResult {
            bits: (0..data.len()).map(|i| if bit(i) == 1 { '1' } else { '0' }).collect(),
            expected,
            p_correct,
            se,
        });
    }

    let n = states.len() as f64;
    let mean = states.iter().map(|s| s.p_correct).sum::<f64>() / n;
    let var = states.iter().map(|s| (s.p_correct - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();

    Ok(ParityResult {
        basis: config.basis,
        ecr_variant: config.ecr_variant,
        shots: config.shots,
        seed: config.seed,
        noise: config.noise,
        gate_order: config.gate_order.clone(),
        syndrome,
        data_qubits: data.iter().map(|d| d.to_string()).collect(),
        states,
        p_correct_mean: mean,
        p_correct_std: std,
        p_correct_se: std / n.sqrt(),
    })
}
