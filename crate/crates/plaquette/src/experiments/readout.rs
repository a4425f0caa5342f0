//! Readout calibration: soft-value histograms from a two-Gaussian model
//! whose overlap reproduces the configured misassignment rates.

use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::rng::SeedStream;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use statrs::distribution::ContinuousCDF;

const N_BINS: usize = 80;

/// Calibration products for one qubit: the Gaussian model, the fixed
/// threshold, sampled soft-value histograms for both preparations, and the
/// misassignment rates measured from those samples.
///
/// Soft values model the 1-D projected readout signal with the ground state
/// centered at -1 and the excited state at +1 under a shared width, so the
/// likelihood-crossing threshold sits at 0 and is chosen before any
/// experiment data is taken.
#[derive(Debug, Clone, Serialize)]
pub struct ReadoutCal {
    pub qubit: String,
    pub shots: u64,
    pub seed: u64,
    /// Shared Gaussian width solving Q(1/sigma) = (p10 + p01) / 2.
    pub sigma: f64,
    /// Decision threshold (always the likelihood crossing at 0).
    pub threshold: f64,
    pub configured_p10: f64,
    pub configured_p01: f64,
    /// Fraction of ground-state samples read out above threshold.
    pub measured_p10: f64,
    /// Fraction of excited-state samples read out at or below threshold.
    pub measured_p01: f64,
    /// 1 - (measured_p10 + measured_p01) / 2.
    pub assignment_fidelity: f64,
    /// Histogram bin edges, N_BINS + 1 ascending values.
    pub bin_edges: Vec<f64>,
    pub ground_counts: Vec<u64>,
    pub excited_counts: Vec<u64>,
}

fn histogram(values: &[f64], lo: f64, hi: f64) -> Vec<u64> {
    let mut counts = vec![0u64; N_BINS];
    let width = (hi - lo) / N_BINS as f64;
    for &v in values {
        let bin = if width > 0.0 {
            (((v - lo) / width).floor() as i64).clamp(0, N_BINS as i64 - 1) as usize
        } else {
            0
        };
        counts[bin] += 1;
    }
    counts
}

fn sample_gaussian(rng: &mut impl Rng, mean: f64, sigma: f64, shots: u64) -> Vec<f64> {
    if sigma == 0.0 {
        return vec![mean; shots as usize];
    }
    let dist = Normal::new(mean, sigma).expect("finite positive sigma");
    (0..shots).map(|_| dist.sample(rng)).collect()
}

/// Sample calibration histograms for one qubit and report the threshold,
/// measured misassignment rates, and assignment fidelity.
pub fn run_readout_cal(
    qubit: &str,
    shots: u64,
    seed: u64,
    device: &DeviceModel,
) -> Result<ReadoutCal> {
    if shots < 100 {
        return Err(Error::BadConfig(format!(
            "readout calibration needs at least 100 shots, got {shots}"
        )));
    }
    let params = device.qubit(qubit)?;
    let mixed_rate = (params.readout_p10 + params.readout_p01) / 2.0;
    if !(0.0..0.5).contains(&mixed_rate) {
        return Err(Error::BadConfig(format!(
            "mean misassignment rate {mixed_rate} is outside [0, 0.5), \
             the two-Gaussian model cannot represent it"
        )));
    }
    let sigma = if mixed_rate == 0.0 {
        0.0
    } else {
        let unit = statrs::distribution::Normal::new(0.0, 1.0).expect("unit normal");
        1.0 / unit.inverse_cdf(1.0 - mixed_rate)
    };
    let threshold = 0.0;

    let seeds = SeedStream::new(seed);
    let ground = sample_gaussian(&mut seeds.job(0), -1.0, sigma, shots);
    let excited = sample_gaussian(&mut seeds.job(1), 1.0, sigma, shots);

    let measured_p10 = ground.iter().filter(|&&v| v > threshold).count() as f64 / shots as f64;
    let measured_p01 = excited.iter().filter(|&&v| v <= threshold).count() as f64 / shots as f64;

    let lo = -1.0 - 5.0 * sigma;
    let hi = 1.0 + 5.0 * sigma;
    let width = (hi - lo) / N_BINS as f64;
    let bin_edges: Vec<f64> = (0..=N_BINS).map(|i| lo + i as f64 * width).collect();

    Ok(ReadoutCal {
        qubit: qubit.to_string(),
        shots,
        seed,
        sigma,
        threshold,
        configured_p10: params.readout_p10,
        configured_p01: params.readout_p01,
        measured_p10,
        measured_p01,
        assignment_fidelity: 1.0 - (measured_p10 + measured_p01) / 2.0,
        bin_edges,
        ground_counts: histogram(&ground, lo, hi),
        excited_counts: histogram(&excited, lo, hi),
    })
}
