//! Kraus channels: amplitude damping, pure dephasing, and device-driven
//! idle noise.

use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::qsim::state::{embed_full, DensityMatrix};
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_probability(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::BadProbability { name: name.to_string(), value });
    }
    Ok(())
}

/// A single-qubit quantum channel in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<Matrix2<Complex64>>,
    target: usize,
}

impl KrausChannel {
    /// Validate trace preservation (Σ K†K = I within 1e-9) and wrap.
    pub fn new(operators: Vec<Matrix2<Complex64>>, target: usize) -> Result<Self> {
        let mut sum = Matrix2::from_element(ZERO);
        for k in &operators {
            sum += k.adjoint() * k;
        }
        let mut deviation: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { ONE } else { ZERO };
                deviation = deviation.max((sum[(i, j)] - expected).norm());
            }
        }
        if deviation > 1e-9 {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self { operators, target })
    }

    pub fn operators(&self) -> &[Matrix2<Complex64>] {
        &self.operators
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// The same channel retargeted to another qubit.
    pub fn with_target(&self, target: usize) -> Self {
        Self { operators: self.operators.clone(), target }
    }
}

/// T1 relaxation channel: |1⟩ decays to |0⟩ with probability `gamma`.
pub fn amplitude_damping(gamma: f64, target: usize) -> Result<KrausChannel> {
    check_probability("gamma", gamma)?;
    let k0 = Matrix2::new(ONE, ZERO, ZERO, real((1.0 - gamma).sqrt()));
    let k1 = Matrix2::new(ZERO, real(gamma.sqrt()), ZERO, ZERO);
    KrausChannel::new(vec![k0, k1], target)
}

/// Pure dephasing channel: the off-diagonal element shrinks by √(1−λ).
pub fn phase_damping(lambda: f64, target: usize) -> Result<KrausChannel> {
    check_probability("lambda", lambda)?;
    let k0 = Matrix2::new(ONE, ZERO, ZERO, real((1.0 - lambda).sqrt()));
    let k1 = Matrix2::new(ZERO, ZERO, ZERO, real(lambda.sqrt()));
    KrausChannel::new(vec![k0, k1], target)
}

/// Damping strengths (γ, λ) accumulated over `duration` seconds of idling
/// with the given T1 and T2. Pure dephasing uses 1/T_φ = 1/T2 − 1/(2 T1),
/// clamped to zero when T2 ≥ 2 T1.
pub fn decoherence_strengths(t1: f64, t2: f64, duration: f64) -> Result<(f64, f64)> {
    if duration < 0.0 {
        return Err(Error::NegativeDuration(duration));
    }
    if t1 <= 0.0 || t2 <= 0.0 {
        return Err(Error::BadConfig(format!(
            "coherence times must be positive, got T1 = {t1}, T2 = {t2}"
        )));
    }
    let gamma = 1.0 - (-duration / t1).exp();
    let dephasing_rate = (1.0 / t2 - 1.0 / (2.0 * t1)).max(0.0);
    let lambda = 1.0 - (-2.0 * duration * dephasing_rate).exp();
    Ok((gamma, lambda))
}

/// Apply T1 and T2 decoherence for `duration` seconds to each listed qubit.
/// Entries pair a qubit's index in `state` with its label in `device`.
pub fn idle_noise(
    state: &mut DensityMatrix,
    qubits: &[(usize, &str)],
    duration: f64,
    device: &DeviceModel,
) -> Result<()> {
    if duration < 0.0 {
        return Err(Error::NegativeDuration(duration));
    }
    if duration == 0.0 {
        return Ok(());
    }
    for &(index, label) in qubits {
        let params = device.qubit(label)?;
        let (gamma, lambda) = decoherence_strengths(params.t1_s, params.t2_s, duration)?;
        state.apply_channel(&amplitude_damping(gamma, index)?)?;
        state.apply_channel(&phase_damping(lambda, index)?)?;
    }
    Ok(())
}

impl DensityMatrix {
    /// ρ ← Σ_k K ρ K† with each Kraus operator embedded on the channel's
    /// target qubit.
    pub fn apply_channel(&mut self, ch: &KrausChannel) -> Result<()> {
        let n = self.n_qubits();
        if ch.target >= n {
            return Err(Error::BadTargets { targets: vec![ch.target], n_qubits: n });
        }
        let dim = self.dim();
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        for k in &ch.operators {
            let op = DMatrix::from_fn(2, 2, |i, j| k[(i, j)]);
            let full = embed_full(&op, &[ch.target], n);
            out += &full * &self.rho * full.adjoint();
        }
        self.rho = out;
        Ok(())
    }
}
