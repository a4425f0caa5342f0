//! End-to-end experiment drivers: weight-four parity checks over all 16
//! input states, conditional CR Ramsey interferometry, randomized
//! benchmarking, and readout calibration histograms.
//!
//! Every driver takes an explicit seed and derives one RNG stream per
//! independent job (input state, sequence, trace), so shot-level output is
//! bit-reproducible and job order never matters.

mod clifford;
mod parity;
mod ramsey;
mod rb;
mod readout;

pub use parity::{
    run_parity, ParityBasis, ParityResult, ParityRunConfig, ParityStateResult, XxxxRealization,
};
pub use ramsey::{run_cr_ramsey, run_full_zeta_sweep, RamseyConfig, RamseyTrace};
pub use rb::{run_rb, RbConfig, RbKind, RbRegisterResult, RbReport};
pub use readout::{run_readout_cal, ReadoutCal};

use serde::{Deserialize, Serialize};

/// Which noise processes an experiment run enables. Everything else in the
/// model is exact unitary evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseSwitches {
    /// Static Z-crosstalk activated while a CR tone is on.
    pub crosstalk: bool,
    /// Amplitude damping and dephasing from each qubit's T1/T2.
    pub decoherence: bool,
    /// Binary misassignment of readout outcomes (p10, p01).
    pub assignment: bool,
}

impl NoiseSwitches {
    pub fn all() -> Self {
        Self { crosstalk: true, decoherence: true, assignment: true }
    }

    pub fn none() -> Self {
        Self { crosstalk: false, decoherence: false, assignment: false }
    }

    pub fn only_crosstalk() -> Self {
        Self { crosstalk: true, decoherence: false, assignment: false }
    }

    pub fn only_assignment() -> Self {
        Self { crosstalk: false, decoherence: false, assignment: true }
    }
}

impl Default for NoiseSwitches {
    fn default() -> Self {
        Self::all()
    }
}
