//! Exponential decay fitting for randomized benchmarking survival curves.

use crate::analysis::lm::fit_least_squares;
use crate::error::{Error, Result};
use serde::Serialize;

/// Fitted survival model A·p^m + B with the derived average gate fidelity
/// 1 − (1 − p)(d − 1)/d.
#[derive(Debug, Clone, Serialize)]
pub struct RbFit {
    pub lengths: Vec<usize>,
    pub survivals: Vec<f64>,
    pub survival_ses: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub a_se: f64,
    pub b_se: f64,
    pub p_se: f64,
    /// Covariance of (A, B, p) from the weighted fit.
    pub covariance: [[f64; 3]; 3],
    /// Hilbert-space dimension: 2 for single-qubit, 4 for two-qubit RB.
    pub dimension: usize,
    pub average_gate_fidelity: f64,
    pub fidelity_se: f64,
    /// Set when the survivals are constant and the decay rate is
    /// unidentifiable; p is reported as exactly 1.
    pub degenerate: bool,
}

/// Weighted fit of survival probabilities against sequence length.
///
/// Initial guesses follow the standard recipe: B from the longest-length
/// survival, A from the first-to-last drop, p from a log-linear regression
/// of the offset-subtracted curve. Fits converging to p outside (0, 1] are
/// rejected. A constant curve short-circuits to the degenerate p = 1
/// report rather than an ill-posed fit.
pub fn fit_rb_decay(
    lengths: &[usize],
    survivals: &[f64],
    ses: &[f64],
    dimension: usize,
) -> Result<RbFit> {
    if lengths.len() < 3 {
        return Err(Error::BadConfig(format!(
            "an RB fit needs at least 3 lengths, got {}",
            lengths.len()
        )));
    }
    if survivals.len() != lengths.len() {
        return Err(Error::DimensionMismatch { got: survivals.len(), expected: lengths.len() });
    }
    if ses.len() != lengths.len() {
        return Err(Error::DimensionMismatch { got: ses.len(), expected: lengths.len() });
    }
    if dimension < 2 {
        return Err(Error::BadConfig(format!("dimension must be at least 2, got {dimension}")));
    }
    if survivals.iter().any(|s| !s.is_finite()) {
        return Err(Error::BadConfig("survival probabilities must be finite".into()));
    }
    let d_factor = (dimension - 1) as f64 / dimension as f64;

    let (min, max) = survivals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if max - min < 1e-9 {
        let mean = survivals.iter().sum::<f64>() / survivals.len() as f64;
        return Ok(RbFit {
            lengths: lengths.to_vec(),
            survivals: survivals.to_vec(),
            survival_ses: ses.to_vec(),
            a: 0.0,
            b: mean,
            p: 1.0,
            a_se: 0.0,
            b_se: 0.0,
            p_se: 0.0,
            covariance: [[0.0; 3]; 3],
            dimension,
            average_gate_fidelity: 1.0,
            fidelity_se: 0.0,
            degenerate: true,
        });
    }

    let m: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
    let sigma: Vec<f64> = ses.iter().map(|s| s.max(1e-6)).collect();

    let b0 = *survivals.last().unwrap();
    let a0 = survivals[0] - b0;
    let a0 = if a0.abs() < 1e-6 { 0.5 } else { a0 };
    // Log-linear regression of the offset-subtracted curve for p.
    let mut sum_m = 0.0;
    let mut sum_mm = 0.0;
    let mut sum_l = 0.0;
    let mut sum_ml = 0.0;
    let mut count = 0.0;
    for (&mi, &si) in m.iter().zip(survivals) {
        let offset = (si - b0) / a0;
        if offset > 1e-9 {
            let log = offset.ln();
            sum_m += mi;
            sum_mm += mi * mi;
            sum_l += log;
            sum_ml += mi * log;
            count += 1.0;
        }
    }
    let p0 = if count >= 2.0 && (count * sum_mm - sum_m * sum_m).abs() > 1e-12 {
        let slope = (count * sum_ml - sum_m * sum_l) / (count * sum_mm - sum_m * sum_m);
        slope.exp().clamp(0.01, 0.999_999)
    } else {
        0.95
    };

    let fit = fit_least_squares(&m, survivals, Some(&sigma), &[a0, b0, p0], |p, mi| {
        p[0] * p[2].powf(mi) + p[1]
    })?;

    let a = fit.params[0];
    let b = fit.params[1];
    let mut p = fit.params[2];
    if p > 1.0 && p <= 1.0 + 1e-9 {
        p = 1.0;
    }
    if !(0.0..=1.0).contains(&p) || p == 0.0 {
        return Err(Error::FitRejected(format!(
            "decay parameter p = {p} outside (0, 1]"
        )));
    }

    let mut covariance = [[0.0; 3]; 3];
    for (i, row) in covariance.iter_mut().enumerate() {
        for (j, value) in row.iter_mut().enumerate() {
            *value = fit.covariance[(i, j)];
        }
    }
    let a_se = covariance[0][0].max(0.0).sqrt();
    let b_se = covariance[1][1].max(0.0).sqrt();
    let p_se = covariance[2][2].max(0.0).sqrt();

    Ok(RbFit {
        lengths: lengths.to_vec(),
        survivals: survivals.to_vec(),
        survival_ses: ses.to_vec(),
        a,
        b,
        p,
        a_se,
        b_se,
        p_se,
        covariance,
        dimension,
        average_gate_fidelity: 1.0 - (1.0 - p) * d_factor,
        fidelity_se: p_se * d_factor,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lengths() -> Vec<usize> {
        vec![1, 3, 6, 10, 20, 40, 80, 140, 200]
    }

    #[test]
    fn exact_geometric_curve_is_recovered() {
        let m = lengths();
        let survivals: Vec<f64> =
            m.iter().map(|&mi| 0.5 * 0.99f64.powi(mi as i32) + 0.5).collect();
        let ses = vec![1e-3; m.len()];
        let fit = fit_rb_decay(&m, &survivals, &ses, 2).unwrap();
        assert!((fit.p - 0.99).abs() < 1e-6, "p = {}", fit.p);
        assert!((fit.a - 0.5).abs() < 1e-5);
        assert!((fit.b - 0.5).abs() < 1e-5);
        assert!((fit.average_gate_fidelity - (1.0 - 0.01 / 2.0)).abs() < 1e-6);
        assert!(!fit.degenerate);
    }

    #[test]
    fn constant_survivals_degenerate_to_unit_p() {
        let m = lengths();
        let survivals = vec![1.0; m.len()];
        let ses = vec![0.0; m.len()];
        let fit = fit_rb_decay(&m, &survivals, &ses, 4).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.p, 1.0);
        assert_eq!(fit.average_gate_fidelity, 1.0);
    }

    #[test]
    fn growing_curves_are_refused() {
        // Exactly 0.05 * 2^m + 0.1: the only zero-residual solution has
        // p = 2, which the decay-oriented start cannot reach through the
        // degenerate p = 1 ridge. The fit must refuse, either by bounded
        // iterations or by the out-of-range check.
        let m = vec![1, 2, 3, 4];
        let survivals: Vec<f64> =
            m.iter().map(|&mi| 0.05 * 2.0f64.powi(mi as i32) + 0.1).collect();
        let ses = vec![1e-4; m.len()];
        assert!(matches!(
            fit_rb_decay(&m, &survivals, &ses, 2),
            Err(Error::FitRejected(_) | Error::FitNonConvergence { .. })
        ));
    }

    #[test]
    fn noisy_curve_recovers_p_within_three_se() {
        use rand_distr::{Binomial, Distribution};
        let mut rng = crate::rng::SeedStream::new(31).job(4);
        let shots = 20_000u64;
        let m = lengths();
        let p_true: f64 = 0.95;
        let mut survivals = Vec::new();
        let mut ses = Vec::new();
        for &mi in &m {
            let probability = 0.5 * p_true.powi(mi as i32) + 0.5;
            let hits = Binomial::new(shots, probability).unwrap().sample(&mut rng);
            let estimate = hits as f64 / shots as f64;
            survivals.push(estimate);
            ses.push((estimate * (1.0 - estimate) / shots as f64).sqrt());
        }
        let fit = fit_rb_decay(&m, &survivals, &ses, 2).unwrap();
        assert!(
            (fit.p - p_true).abs() < 3.0 * fit.p_se,
            "p = {} +- {} vs {}",
            fit.p,
            fit.p_se,
            p_true
        );
    }

    #[test]
    fn too_few_lengths_are_rejected() {
        assert!(matches!(
            fit_rb_decay(&[1, 2], &[0.9, 0.8], &[0.01, 0.01], 2),
            Err(Error::BadConfig(_))
        ));
    }
}
