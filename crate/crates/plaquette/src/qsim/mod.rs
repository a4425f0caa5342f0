//! Dense quantum-state engine for up to 7 qubits.
//!
//! Qubit ordering convention: qubit 0 is the leftmost position in a ket
//! label, i.e. the most significant bit of a basis-state index. The
//! four-qubit label `|ijkl>` therefore has qubit 0 = `i`, and Pauli string
//! labels such as `ZIIZ` follow the same left-to-right order.

mod channel;
mod pauli;
mod state;

pub use channel::{
    amplitude_damping, decoherence_strengths, idle_noise, phase_damping, KrausChannel,
};
pub use pauli::{Pauli, PauliString};
pub(crate) use state::embed_full;
pub use state::{
    diagonal_frequencies, ket0, ket1, ket_minus, ket_minus_i, ket_plus, ket_plus_i,
    DensityMatrix, StateVector, MAX_QUBITS,
};
