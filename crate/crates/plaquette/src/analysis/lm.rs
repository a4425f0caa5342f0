//! Small damped least-squares fitter shared by the frequency and RB fits.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub(crate) struct LmFit {
    pub params: Vec<f64>,
    /// Parameter covariance. When per-point sigmas were supplied this is
    /// the standard (J^T W J)^-1; otherwise it is scaled by the reduced
    /// chi-square, treating the scatter as the noise estimate.
    pub covariance: DMatrix<f64>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub chi_squared: f64,
}

fn chi_squared(
    x: &[f64],
    y: &[f64],
    weights: &[f64],
    params: &[f64],
    model: &impl Fn(&[f64], f64) -> f64,
) -> f64 {
    x.iter()
        .zip(y)
        .zip(weights)
        .map(|((&xi, &yi), &wi)| {
            let r = yi - model(params, xi);
            wi * r * r
        })
        .sum()
}

fn jacobian(
    x: &[f64],
    params: &[f64],
    model: &impl Fn(&[f64], f64) -> f64,
) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(x.len(), params.len());
    let mut shifted = params.to_vec();
    for col in 0..params.len() {
        let h = 1e-7 * params[col].abs().max(1e-7);
        shifted[col] = params[col] + h;
        let plus: Vec<f64> = x.iter().map(|&xi| model(&shifted, xi)).collect();
        shifted[col] = params[col] - h;
        let minus: Vec<f64> = x.iter().map(|&xi| model(&shifted, xi)).collect();
        shifted[col] = params[col];
        for row in 0..x.len() {
            j[(row, col)] = (plus[row] - minus[row]) / (2.0 * h);
        }
    }
    j
}

/// Minimize sum_i w_i (y_i - model(params, x_i))^2 by Levenberg-Marquardt
/// with a central-difference Jacobian. `sigma`, when given, holds the
/// per-point standard deviations defining the weights.
pub(crate) fn fit_least_squares(
    x: &[f64],
    y: &[f64],
    sigma: Option<&[f64]>,
    initial: &[f64],
    model: impl Fn(&[f64], f64) -> f64,
) -> Result<LmFit> {
    let n = x.len();
    let k = initial.len();
    if y.len() != n {
        return Err(Error::DimensionMismatch { got: y.len(), expected: n });
    }
    if let Some(s) = sigma {
        if s.len() != n {
            return Err(Error::DimensionMismatch { got: s.len(), expected: n });
        }
    }
    if n < k {
        return Err(Error::BadConfig(format!(
            "{n} points cannot constrain {k} parameters"
        )));
    }
    let weights: Vec<f64> = match sigma {
        Some(s) => s.iter().map(|si| 1.0 / (si * si).max(1e-300)).collect(),
        None => vec![1.0; n],
    };

    let mut params = initial.to_vec();
    let mut chi = chi_squared(x, y, &weights, &params, &model);
    let mut lambda = 1e-3;
    let max_iterations = 600;
    let mut converged = false;
    let mut iterations = 0;
    let mut stagnant = 0usize;

    while iterations < max_iterations {
        iterations += 1;
        let j = jacobian(x, &params, &model);
        let residuals = DVector::from_iterator(
            n,
            x.iter().zip(y).map(|(&xi, &yi)| yi - model(&params, xi)),
        );
        let w = DMatrix::from_diagonal(&DVector::from_column_slice(&weights));
        let jtw = j.transpose() * &w;
        let jtwj = &jtw * &j;
        let gradient = &jtw * &residuals;

        let mut improved = false;
        while lambda < 1e14 {
            let mut damped = jtwj.clone();
            for d in 0..k {
                damped[(d, d)] += lambda * jtwj[(d, d)].max(1e-30);
            }
            let Some(step) = damped.lu().solve(&gradient) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = params.iter().zip(step.iter()).map(|(p, s)| p + s).collect();
            let trial_chi = chi_squared(x, y, &weights, &trial, &model);
            if trial_chi.is_finite() && trial_chi <= chi {
                let gain = chi - trial_chi;
                let step_size = step.amax();
                let scale = params.iter().map(|p| p.abs()).fold(1e-12, f64::max);
                params = trial;
                chi = trial_chi;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                if gain <= 1e-12 * (chi + 1e-30) || step_size <= 1e-11 * scale {
                    converged = true;
                }
                // An exactly determined fit interpolates: chi falls
                // geometrically toward zero and the relative gain never
                // looks small, so stop on an absolute floor or after the
                // improvements stay negligible for several steps.
                if chi <= 1e-20 {
                    converged = true;
                }
                if gain <= 1e-9 * (chi + 1e-30) {
                    stagnant += 1;
                    if stagnant >= 5 {
                        converged = true;
                    }
                } else {
                    stagnant = 0;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // The damping saturated without finding a downhill step: the
            // current point is a (numerical) minimum.
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::FitNonConvergence { iterations });
    }

    let j = jacobian(x, &params, &model);
    let w = DMatrix::from_diagonal(&DVector::from_column_slice(&weights));
    let jtwj = j.transpose() * &w * &j;
    let svd = jtwj.svd(true, true);
    let max_sv = svd.singular_values.amax();
    let mut covariance = svd
        .pseudo_inverse(1e-12 * max_sv.max(1e-300))
        .unwrap_or_else(|_| DMatrix::zeros(k, k));
    if sigma.is_none() && n > k {
        covariance *= chi / (n - k) as f64;
    }

    Ok(LmFit { params, covariance, chi_squared: chi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_quadratic_exactly() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 / 4.0).collect();
        let truth = [1.5, -2.0, 0.25];
        let y: Vec<f64> =
            x.iter().map(|&xi| truth[0] + truth[1] * xi + truth[2] * xi * xi).collect();
        let fit = fit_least_squares(&x, &y, None, &[0.0, 0.0, 0.0], |p, xi| {
            p[0] + p[1] * xi + p[2] * xi * xi
        })
        .unwrap();
        for (got, want) in fit.params.iter().zip(truth) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
        assert!(fit.chi_squared < 1e-16);
    }

    #[test]
    fn weighted_fit_uses_supplied_sigmas_for_covariance() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&xi| 2.0 * xi + 1.0).collect();
        let sigma = vec![0.5; 10];
        let fit = fit_least_squares(&x, &y, Some(&sigma), &[1.0, 0.0], |p, xi| {
            p[1] * xi + p[0]
        })
        .unwrap();
        // Known closed form for a straight-line fit with equal sigmas.
        let n = 10.0;
        let sx: f64 = x.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let denominator = n * sxx - sx * sx;
        let expected_var_slope = 0.25 * n / denominator;
        assert!((fit.covariance[(1, 1)] - expected_var_slope).abs() < 1e-9);
    }

    #[test]
    fn nonlinear_exponential_converges_from_a_rough_start() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 / 10.0).collect();
        let y: Vec<f64> = x.iter().map(|&xi| 3.0 * (-0.7 * xi).exp() + 0.2).collect();
        let fit = fit_least_squares(&x, &y, None, &[1.0, -0.2, 0.0], |p, xi| {
            p[0] * (p[1] * xi).exp() + p[2]
        })
        .unwrap();
        assert!((fit.params[0] - 3.0).abs() < 1e-6);
        assert!((fit.params[1] + 0.7).abs() < 1e-6);
        assert!((fit.params[2] - 0.2).abs() < 1e-6);
    }
}
