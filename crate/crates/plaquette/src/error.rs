//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary (max deviation from U*U = I is {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid target qubits {targets:?} for a {n_qubits}-qubit state")]
    BadTargets { targets: Vec<usize>, n_qubits: usize },

    #[error("operator dimension {got} does not match {expected} for the given targets")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("Pauli string '{label}' is not diagonal; only I and Z are allowed here")]
    NonDiagonalPauli { label: String },

    #[error("invalid Pauli label '{label}'")]
    BadPauliLabel { label: String },

    #[error("Pauli string length {got} does not match {expected} qubits")]
    PauliLengthMismatch { got: usize, expected: usize },

    #[error("Kraus channel is not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("duration must be nonnegative, got {0}")]
    NegativeDuration(f64),

    #[error("probability out of range: {name} = {value}")]
    BadProbability { name: String, value: f64 },

    #[error("device validation failed: {0}")]
    DeviceInvalid(String),

    #[error("unknown qubit label '{0}'")]
    UnknownQubit(String),

    #[error("unknown CR gate '{0}'")]
    UnknownGate(String),

    #[error("failed to parse device file {path}: {message}")]
    DeviceParse { path: String, message: String },

    #[error("schedule cannot be tracked symbolically: {0}")]
    UntrackableSchedule(String),

    #[error("gate '{gate}' does not involve qubit '{qubit}'")]
    QubitNotInGate { gate: String, qubit: String },

    #[error("'{qubit}' is not a spectator of gate '{gate}'")]
    NotASpectator { gate: String, qubit: String },

    #[error("frequency extraction failed: {0}")]
    ExtractionFailure(String),

    #[error("fit did not converge after {iterations} iterations")]
    FitNonConvergence { iterations: usize },

    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("zeta table must have {expected} finite entries, got {got}")]
    BadZetaTable { expected: usize, got: usize },

    #[error("malformed CSV at {path}: {message}")]
    BadCsv { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
