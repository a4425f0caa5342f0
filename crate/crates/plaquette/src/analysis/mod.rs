//! Numerical analysis: Ramsey frequency extraction, the difference-matrix
//! pseudo-inverse reconstruction of Z-string strengths, and randomized
//! benchmarking decay fits.

mod freq;
mod lm;
mod rbfit;
mod recon;

pub use freq::{extract_frequency, FrequencyEstimate};
pub use rbfit::{fit_rb_decay, RbFit};
pub use recon::{
    b_matrix_rank, build_b_matrix, build_b_matrix_n, hadamard_matrix, reconstruct_alpha,
    sensitivity_bound, AlphaEstimate, EtaVector, ZetaTable, MEASURED_POSITIONS,
    SENSITIVITY_LIMIT_HZ,
};
