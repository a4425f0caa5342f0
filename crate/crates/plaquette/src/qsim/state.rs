//! State vectors and density matrices with dense linear algebra.

use crate::error::{Error, Result};
use crate::qsim::pauli::PauliString;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

/// Largest supported register size.
pub const MAX_QUBITS: usize = 7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-qubit amplitude pairs for the common preparation states.
pub fn ket0() -> [Complex64; 2] {
    [ONE, ZERO]
}

pub fn ket1() -> [Complex64; 2] {
    [ZERO, ONE]
}

pub fn ket_plus() -> [Complex64; 2] {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [r, r]
}

pub fn ket_minus() -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)]
}

pub fn ket_plus_i() -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(r, 0.0), Complex64::new(0.0, r)]
}

pub fn ket_minus_i() -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(r, 0.0), Complex64::new(0.0, -r)]
}

fn check_n(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::BadConfig(format!(
            "register size must be between 1 and {MAX_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

/// Bit of `qubit` within basis index `index` for an `n`-qubit register.
/// Qubit 0 is the most significant bit.
pub(crate) fn bit_of(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

fn check_targets(targets: &[usize], n: usize) -> Result<()> {
    let bad = || Error::BadTargets { targets: targets.to_vec(), n_qubits: n };
    if targets.is_empty() {
        return Err(bad());
    }
    let mut seen = [false; MAX_QUBITS];
    for &t in targets {
        if t >= n || seen[t] {
            return Err(bad());
        }
        seen[t] = true;
    }
    Ok(())
}

fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let prod = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let expected = if i == j { ONE } else { ZERO };
            dev = dev.max((prod[(i, j)] - expected).norm());
        }
    }
    dev
}

fn validate_unitary_args(u: &DMatrix<Complex64>, targets: &[usize], n: usize) -> Result<()> {
    check_targets(targets, n)?;
    let expected = 1usize << targets.len();
    if u.nrows() != expected || u.ncols() != expected {
        return Err(Error::DimensionMismatch { got: u.nrows(), expected });
    }
    let deviation = unitarity_deviation(u);
    if deviation > 1e-9 {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Embed a 2^k-dimensional operator acting on `targets` into the full
/// 2^n-dimensional space. `targets[0]` supplies the most significant bit of
/// the sub-index. The caller is responsible for validating dimensions.
pub(crate) fn embed_full(op: &DMatrix<Complex64>, targets: &[usize], n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let sub_index = |i: usize| -> usize {
        let mut s = 0usize;
        for &t in targets {
            s = (s << 1) | bit_of(i, t, n);
        }
        s
    };
    let mut rest_mask = dim - 1;
    for &t in targets {
        rest_mask &= !(1usize << (n - 1 - t));
    }
    let mut full = DMatrix::from_element(dim, dim, ZERO);
    for i in 0..dim {
        let si = sub_index(i);
        let ri = i & rest_mask;
        for j in 0..dim {
            if ri == (j & rest_mask) {
                full[(i, j)] = op[(si, sub_index(j))];
            }
        }
    }
    full
}

/// Eigenvalues η_b in Hz of H = Σ_s α_s P_s / 2 over all computational basis
/// states, with each P_s a diagonal Z-string. η_b = Σ_s α_s (−1)^{⟨s,b⟩} / 2.
pub fn diagonal_frequencies(coeffs: &[(PauliString, f64)], n_qubits: usize) -> Result<Vec<f64>> {
    check_n(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut eta = vec![0.0; dim];
    for (ps, alpha) in coeffs {
        if ps.len() != n_qubits {
            return Err(Error::PauliLengthMismatch { got: ps.len(), expected: n_qubits });
        }
        let mask = ps.z_mask()?;
        for (b, e) in eta.iter_mut().enumerate() {
            let sign = if (mask & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *e += alpha * sign / 2.0;
        }
    }
    Ok(eta)
}

fn sample_bits(p_one: f64, shots: usize, seed: u64) -> Result<Vec<u8>> {
    if shots == 0 {
        return Err(Error::BadConfig("shots must be at least 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok((0..shots).map(|_| u8::from(rng.gen::<f64>() < p_one)).collect())
}

/// Pure quantum state over 1..=7 qubits; the fast path for noiseless circuits.
#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    amps: DVector<Complex64>,
}

impl StateVector {
    /// |0...0⟩ on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::BadConfig(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = DVector::from_element(dim, ZERO);
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Tensor product of per-qubit amplitude pairs, qubit 0 first.
    pub fn from_product(qubits: &[[Complex64; 2]]) -> Result<Self> {
        let n = qubits.len();
        check_n(n)?;
        let dim = 1usize << n;
        let mut amps = DVector::from_element(dim, ONE);
        for (i, amp) in amps.iter_mut().enumerate() {
            for (q, single) in qubits.iter().enumerate() {
                *amp *= single[bit_of(i, q, n)];
            }
        }
        let sv = Self { n_qubits: n, amps };
        sv.check_norm()?;
        Ok(sv)
    }

    /// Wrap raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { got: dim, expected: dim.next_power_of_two().max(2) });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_n(n_qubits)?;
        let sv = Self { n_qubits, amps: DVector::from_vec(amps) };
        sv.check_norm()?;
        Ok(sv)
    }

    fn check_norm(&self) -> Result<()> {
        let norm_sq: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::BadConfig(format!(
                "state vector squared norm is {norm_sq}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amps.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// Apply a 2^k unitary to the listed target qubits.
    pub fn apply_unitary(&mut self, u: &DMatrix<Complex64>, targets: &[usize]) -> Result<()> {
        validate_unitary_args(u, targets, self.n_qubits)?;
        let full = embed_full(u, targets, self.n_qubits);
        self.amps = &full * &self.amps;
        Ok(())
    }

    /// Evolve under H = Σ α_s P_s / 2 for `duration` seconds, i.e. apply
    /// exp(−i 2π H t): amplitude b picks up the phase e^{−i 2π η_b t}.
    pub fn evolve_diagonal(&mut self, coeffs: &[(PauliString, f64)], duration: f64) -> Result<()> {
        if duration < 0.0 {
            return Err(Error::NegativeDuration(duration));
        }
        let eta = diagonal_frequencies(coeffs, self.n_qubits)?;
        for (amp, eta_b) in self.amps.iter_mut().zip(&eta) {
            *amp *= Complex64::from_polar(1.0, -2.0 * PI * eta_b * duration);
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        check_targets(&[qubit], self.n_qubits)?;
        let n = self.n_qubits;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| bit_of(*i, qubit, n) == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        Ok(1.0 - 2.0 * self.prob_one(qubit)?)
    }

    /// Sample `shots` projective Z-measurement outcomes of one qubit without
    /// collapsing the state. Deterministic for a fixed seed.
    pub fn measure_z(&self, qubit: usize, shots: usize, seed: u64) -> Result<Vec<u8>> {
        sample_bits(self.prob_one(qubit)?, shots, seed)
    }

    /// Measure one qubit, collapse the state, and return the outcome.
    pub fn measure_z_collapse(&mut self, qubit: usize, rng: &mut impl Rng) -> Result<u8> {
        let p_one = self.prob_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p_one);
        let keep_prob = if outcome == 1 { p_one } else { 1.0 - p_one };
        let n = self.n_qubits;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if bit_of(i, qubit, n) != usize::from(outcome) {
                *amp = ZERO;
            } else {
                *amp /= Complex64::new(keep_prob.sqrt(), 0.0);
            }
        }
        Ok(outcome)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { n_qubits: self.n_qubits, rho: &self.amps * self.amps.adjoint() }
    }
}

/// Mixed quantum state over 1..=7 qubits; the noisy-evolution state.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n_qubits: usize,
    pub(super) rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// |0...0⟩⟨0...0| on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Ok(StateVector::zero(n_qubits)?.to_density())
    }

    /// Computational basis projector |index⟩⟨index|.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Ok(StateVector::basis(n_qubits, index)?.to_density())
    }

    /// Pure product state of per-qubit amplitude pairs.
    pub fn from_product(qubits: &[[Complex64; 2]]) -> Result<Self> {
        Ok(StateVector::from_product(qubits)?.to_density())
    }

    /// Wrap a raw matrix after checking the density-matrix invariants.
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        let dim = rho.nrows();
        if dim != rho.ncols() || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { got: rho.ncols(), expected: dim });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_n(n_qubits)?;
        let dm = Self { n_qubits, rho };
        dm.validate()?;
        Ok(dm)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.rho[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// Check Hermiticity (1e-10), unit trace (1e-10), and spectrum ≥ −1e-8.
    pub fn validate(&self) -> Result<()> {
        let mut herm_dev: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                herm_dev = herm_dev.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        if herm_dev > 1e-10 {
            return Err(Error::BadConfig(format!(
                "density matrix is not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > 1e-10 {
            return Err(Error::BadConfig(format!("density matrix trace is {tr}, expected 1")));
        }
        let eigs = self.rho.clone().symmetric_eigen().eigenvalues;
        if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
            if min < -1e-8 {
                return Err(Error::BadConfig(format!(
                    "density matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Apply a 2^k unitary to the listed target qubits: ρ ← U ρ U†.
    pub fn apply_unitary(&mut self, u: &DMatrix<Complex64>, targets: &[usize]) -> Result<()> {
        validate_unitary_args(u, targets, self.n_qubits)?;
        let full = embed_full(u, targets, self.n_qubits);
        self.rho = &full * &self.rho * full.adjoint();
        Ok(())
    }

    /// Evolve under H = Σ α_s P_s / 2 for `duration` seconds, i.e. apply
    /// exp(−i 2π H t): ρ_{ij} picks up the phase e^{−i 2π (η_i − η_j) t}.
    pub fn evolve_diagonal(&mut self, coeffs: &[(PauliString, f64)], duration: f64) -> Result<()> {
        if duration < 0.0 {
            return Err(Error::NegativeDuration(duration));
        }
        let eta = diagonal_frequencies(coeffs, self.n_qubits)?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let phase = -2.0 * PI * (eta[i] - eta[j]) * duration;
                self.rho[(i, j)] *= Complex64::from_polar(1.0, phase);
            }
        }
        Ok(())
    }

    /// Diagonal of ρ in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.rho[(i, i)].re).collect()
    }

    /// Population of one computational basis state.
    pub fn basis_population(&self, index: usize) -> f64 {
        self.rho[(index, index)].re
    }

    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        check_targets(&[qubit], self.n_qubits)?;
        let n = self.n_qubits;
        Ok((0..self.dim())
            .filter(|&i| bit_of(i, qubit, n) == 1)
            .map(|i| self.rho[(i, i)].re)
            .sum())
    }

    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        Ok(1.0 - 2.0 * self.prob_one(qubit)?)
    }

    /// Marginal distribution over the listed qubits, in the given order.
    /// Entry `s` is the probability that the qubits read out as the bits of
    /// `s`, with `qubits[0]` the most significant bit.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_targets(qubits, self.n_qubits)?;
        let n = self.n_qubits;
        let mut out = vec![0.0; 1 << qubits.len()];
        for i in 0..self.dim() {
            let mut s = 0usize;
            for &q in qubits {
                s = (s << 1) | bit_of(i, q, n);
            }
            out[s] += self.rho[(i, i)].re;
        }
        Ok(out)
    }

    /// Partial trace keeping the listed qubits, in the given order.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_targets(keep, self.n_qubits)?;
        let n = self.n_qubits;
        let out_dim = 1usize << keep.len();
        let sub_index = |i: usize| -> usize {
            let mut s = 0usize;
            for &q in keep {
                s = (s << 1) | bit_of(i, q, n);
            }
            s
        };
        let mut rest_mask = self.dim() - 1;
        for &q in keep {
            rest_mask &= !(1usize << (n - 1 - q));
        }
        let mut out = DMatrix::from_element(out_dim, out_dim, ZERO);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if (i & rest_mask) == (j & rest_mask) {
                    out[(sub_index(i), sub_index(j))] += self.rho[(i, j)];
                }
            }
        }
        Ok(DensityMatrix { n_qubits: keep.len(), rho: out })
    }

    /// Sample `shots` projective Z-measurement outcomes of one qubit without
    /// collapsing the state. Deterministic for a fixed seed.
    pub fn measure_z(&self, qubit: usize, shots: usize, seed: u64) -> Result<Vec<u8>> {
        sample_bits(self.prob_one(qubit)?, shots, seed)
    }

    /// Measure one qubit, collapse the state, and return the outcome.
    pub fn measure_z_collapse(&mut self, qubit: usize, rng: &mut impl Rng) -> Result<u8> {
        let p_one = self.prob_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p_one);
        let keep_prob = if outcome == 1 { p_one } else { 1.0 - p_one };
        let n = self.n_qubits;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if bit_of(i, qubit, n) != usize::from(outcome)
                    || bit_of(j, qubit, n) != usize::from(outcome)
                {
                    self.rho[(i, j)] = ZERO;
                } else {
                    self.rho[(i, j)] /= Complex64::new(keep_prob, 0.0);
                }
            }
        }
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_x() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    fn zx_generator() -> DMatrix<Complex64> {
        // Z ⊗ X as a dense 4x4.
        let z = [1.0, -1.0];
        let mut m = DMatrix::from_element(4, 4, ZERO);
        for i in 0..4 {
            let (zi, xi) = (i >> 1, i & 1);
            m[(i, (zi << 1) | (xi ^ 1))] = Complex64::new(z[zi], 0.0);
        }
        m
    }

    /// exp(A) by plain Taylor series; an oracle independent of any rotation
    /// identities used elsewhere.
    fn taylor_exp(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = a.nrows();
        let mut sum = DMatrix::identity(dim, dim);
        let mut term = DMatrix::<Complex64>::identity(dim, dim);
        for k in 1..60 {
            term = (&term * a) / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    #[test]
    fn x_flips_zero_to_one() {
        let mut dm = DensityMatrix::zero(1).unwrap();
        dm.apply_unitary(&pauli_x(), &[0]).unwrap();
        assert_abs_diff_eq!(dm.basis_population(1), 1.0, epsilon = 1e-12);

        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_unitary(&pauli_x(), &[1]).unwrap();
        assert_abs_diff_eq!(sv.prob_one(1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv.prob_one(0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut dm = DensityMatrix::from_product(&[ket_plus(), ket_minus_i()]).unwrap();
        let before = dm.clone();
        dm.apply_unitary(&DMatrix::identity(4, 4), &[0, 1]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((dm.element(i, j) - before.element(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zx_half_rotation_matches_taylor_exponential() {
        // exp(−i (π/4) Z⊗X) applied through the engine versus a Taylor-series
        // matrix exponential of the same generator.
        let gen = zx_generator() * Complex64::new(0.0, -PI / 4.0);
        let u = taylor_exp(&gen);
        let mut dm = DensityMatrix::zero(2).unwrap();
        dm.apply_unitary(&u, &[0, 1]).unwrap();

        let mut direct = DensityMatrix::zero(2).unwrap().matrix().clone();
        direct = &u * direct * u.adjoint();
        for i in 0..4 {
            for j in 0..4 {
                assert!((dm.element(i, j) - direct[(i, j)]).norm() < 1e-10);
            }
        }
        // Sanity: |00⟩ under ZX(π/2) moves population to |01⟩ with p = 1/2.
        assert_abs_diff_eq!(dm.basis_population(1), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn embedding_acts_on_correct_qubit() {
        let mut sv = StateVector::zero(3).unwrap();
        sv.apply_unitary(&pauli_x(), &[2]).unwrap();
        // Qubit 2 is the least significant bit.
        assert_abs_diff_eq!(sv.probabilities()[0b001], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_coefficients_are_a_noop() {
        let mut dm = DensityMatrix::from_product(&[ket_plus(), ket0()]).unwrap();
        let before = dm.clone();
        let coeffs = vec![(PauliString::from_label("ZI").unwrap(), 0.0)];
        dm.evolve_diagonal(&coeffs, 1.7e-6).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((dm.element(i, j) - before.element(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn quarter_turn_about_z_from_plus() {
        // H = α Z / 2 with α = 1 MHz, t = 250 ns: exp(−i 2π H t) advances the
        // relative phase of |1⟩ by 2π · α · t · (1/2 − (−1/2)) = π/2, taking
        // |+⟩ to (|0⟩ + i|1⟩)/√2 up to a global phase.
        let mut sv = StateVector::from_product(&[ket_plus()]).unwrap();
        let coeffs = vec![(PauliString::from_label("Z").unwrap(), 1.0e6)];
        sv.evolve_diagonal(&coeffs, 250e-9).unwrap();
        let target = StateVector::from_product(&[ket_plus_i()]).unwrap();
        assert_abs_diff_eq!(sv.inner(&target).norm(), 1.0, epsilon = 1e-10);

        let mut dm = DensityMatrix::from_product(&[ket_plus()]).unwrap();
        dm.evolve_diagonal(&coeffs, 250e-9).unwrap();
        let off_diag = dm.element(0, 1);
        assert_abs_diff_eq!(off_diag.re, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(off_diag.im, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn eta_matches_kronecker_hadamard_oracle() {
        // Compare diagonal_frequencies against H_16 · α / 2 with H_16 built
        // by explicit Kronecker products of [[1,1],[1,−1]].
        let n = 4;
        let dim = 1 << n;
        let mut alpha = vec![0.0; dim];
        let entries = [
            ("IIIZ", -297.5e3),
            ("IIZI", -128.75e3),
            ("IZII", -348.13e3),
            ("ZZII", -129.38e3),
            ("ZIZI", 31.25e3),
        ];
        let mut coeffs = Vec::new();
        for (label, v) in entries {
            let ps = PauliString::from_label(label).unwrap();
            alpha[ps.z_mask().unwrap()] = v;
            coeffs.push((ps, v));
        }

        let mut h = vec![vec![1.0f64]];
        for _ in 0..n {
            let old = h;
            let m = old.len();
            let mut new = vec![vec![0.0; 2 * m]; 2 * m];
            for i in 0..m {
                for j in 0..m {
                    new[i][j] = old[i][j];
                    new[i][j + m] = old[i][j];
                    new[i + m][j] = old[i][j];
                    new[i + m][j + m] = -old[i][j];
                }
            }
            h = new;
        }

        let eta = diagonal_frequencies(&coeffs, n).unwrap();
        for b in 0..dim {
            let oracle: f64 = (0..dim).map(|s| h[b][s] * alpha[s]).sum::<f64>() / 2.0;
            let rel = (eta[b] - oracle).abs() / oracle.abs().max(1.0);
            assert!(rel < 1e-9, "eta[{b}] = {} vs oracle {}", eta[b], oracle);
        }
    }

    #[test]
    fn diagonal_evolutions_commute() {
        let a = vec![(PauliString::from_label("ZI").unwrap(), 2.5e5)];
        let b = vec![(PauliString::from_label("ZZ").unwrap(), -1.1e5)];
        let start = DensityMatrix::from_product(&[ket_plus(), ket_minus()]).unwrap();

        let mut ab = start.clone();
        ab.evolve_diagonal(&a, 3e-7).unwrap();
        ab.evolve_diagonal(&b, 3e-7).unwrap();
        let mut ba = start.clone();
        ba.evolve_diagonal(&b, 3e-7).unwrap();
        ba.evolve_diagonal(&a, 3e-7).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((ab.element(i, j) - ba.element(i, j)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn measure_zero_state_gives_all_zeros() {
        let sv = StateVector::zero(1).unwrap();
        let shots = sv.measure_z(0, 1000, 7).unwrap();
        assert!(shots.iter().all(|&b| b == 0));
    }

    #[test]
    fn measure_plus_state_is_balanced_and_deterministic() {
        let sv = StateVector::from_product(&[ket_plus()]).unwrap();
        let shots = sv.measure_z(0, 100_000, 42).unwrap();
        let ones: usize = shots.iter().map(|&b| b as usize).sum();
        let fraction = ones as f64 / 100_000.0;
        // 5 sigma binomial bound around 0.5.
        assert!((fraction - 0.5).abs() < 5.0 * 0.5 / (100_000f64).sqrt());
        assert_eq!(shots, sv.measure_z(0, 100_000, 42).unwrap());
        assert_ne!(shots, sv.measure_z(0, 100_000, 43).unwrap());
    }

    #[test]
    fn bell_state_collapse_is_perfectly_correlated() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let amps = vec![Complex64::new(r, 0.0), ZERO, ZERO, Complex64::new(r, 0.0)];
        let bell = DensityMatrix::from_matrix({
            let v = DVector::from_vec(amps);
            &v * v.adjoint()
        })
        .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut dm = bell.clone();
            let outcome = dm.measure_z_collapse(0, &mut rng).unwrap();
            assert_abs_diff_eq!(
                dm.prob_one(1).unwrap(),
                f64::from(outcome),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn reduced_state_of_product_is_the_factor() {
        let dm = DensityMatrix::from_product(&[ket_plus(), ket1(), ket_minus_i()]).unwrap();
        let r = dm.reduced(&[2]).unwrap();
        assert_abs_diff_eq!(r.element(0, 1).re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.element(0, 1).im, 0.5, epsilon = 1e-12);
        let m = dm.marginal(&[1, 2]).unwrap();
        assert_abs_diff_eq!(m[0b10], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m[0b11], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn statevector_and_density_paths_agree() {
        let mut sv = StateVector::zero(2).unwrap();
        let mut dm = DensityMatrix::zero(2).unwrap();
        let gen = zx_generator() * Complex64::new(0.0, -PI / 4.0);
        let u = taylor_exp(&gen);
        let coeffs = vec![(PauliString::from_label("ZZ").unwrap(), 3.3e5)];
        sv.apply_unitary(&u, &[0, 1]).unwrap();
        sv.evolve_diagonal(&coeffs, 1e-6).unwrap();
        dm.apply_unitary(&u, &[0, 1]).unwrap();
        dm.evolve_diagonal(&coeffs, 1e-6).unwrap();
        let from_sv = sv.to_density();
        for i in 0..4 {
            for j in 0..4 {
                assert!((from_sv.element(i, j) - dm.element(i, j)).norm() < 1e-9);
            }
        }
        dm.validate().unwrap();
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut dm = DensityMatrix::zero(2).unwrap();
        let not_unitary = DMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(
            dm.apply_unitary(&not_unitary, &[0]),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            dm.apply_unitary(&pauli_x(), &[3]),
            Err(Error::BadTargets { .. })
        ));
        assert!(matches!(
            dm.apply_unitary(&pauli_x(), &[0, 0]),
            Err(Error::BadTargets { .. })
        ));
        assert!(matches!(
            dm.apply_unitary(&pauli_x(), &[0, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
        let xy = vec![(PauliString::from_label("XZ").unwrap(), 1.0)];
        assert!(matches!(
            dm.evolve_diagonal(&xy, 1e-6),
            Err(Error::NonDiagonalPauli { .. })
        ));
        let z = vec![(PauliString::from_label("ZZ").unwrap(), 1.0)];
        assert!(matches!(
            dm.evolve_diagonal(&z, -1e-9),
            Err(Error::NegativeDuration(_))
        ));
        assert!(StateVector::basis(8, 0).is_err());
    }
}
