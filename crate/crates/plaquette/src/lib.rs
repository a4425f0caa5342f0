//! Simulation and analysis toolkit for a five-qubit surface-code plaquette:
//! four data qubits coupled to one syndrome qubit through cross-resonance
//! (CR) two-qubit gates.
//!
//! The crate models the dominant imperfection of CR gates on fixed-frequency
//! transmons: while a CR tone is on, every spectator qubit picks up
//! state-dependent Z interactions described by a diagonal Hamiltonian
//! H = sum over Pauli-Z strings of alpha * Z..Z / 2. The modules build on
//! each other roughly in this order:
//!
//! * [`qsim`]: dense state vectors and density matrices on up to 7 qubits,
//!   unitary application, diagonal-Hamiltonian evolution, Kraus channels,
//!   and seeded projective measurement.
//! * [`device`]: measured device parameters (coherence times, readout
//!   errors, per-gate crosstalk tables) with a built-in five-qubit default
//!   and a strict TOML configuration format.
//! * [`schedule`]: timed pulse schedules for echoed cross-resonance gates
//!   (2-pulse and 4-pulse variants), direction-corrected CNOTs, a symbolic
//!   sign-tracking oracle for crosstalk survival, and a schedule executor.
//! * [`analysis`]: Ramsey frequency extraction, the 24x16 difference matrix
//!   linking diagonal energies to conditional frequencies, the Hadamard /
//!   pseudo-inverse reconstruction of crosstalk strengths, and RB decay fits.
//! * [`experiments`]: end-to-end runners for weight-four parity checks,
//!   CR Ramsey interferometry, randomized benchmarking, and readout
//!   calibration.
//!
//! All experiment runners are deterministic for a fixed seed: randomness
//! flows through counter-based streams derived from one master seed.

pub mod analysis;
pub mod device;
pub mod error;
pub mod experiments;
pub mod qsim;
pub mod rng;
pub mod schedule;

pub use analysis::{
    build_b_matrix, extract_frequency, fit_rb_decay, reconstruct_alpha, AlphaEstimate,
    EtaVector, FrequencyEstimate, RbFit, ZetaTable,
};
pub use device::{
    default_plaquette, effective_assignment_fidelity, load_device, save_device, AlphaTable,
    CRGateSpec, DeviceModel, DriveParity, QubitParams,
};
pub use error::{Error, Result};
pub use experiments::{
    run_cr_ramsey, run_full_zeta_sweep, run_parity, run_rb, run_readout_cal, NoiseSwitches,
    ParityBasis, ParityResult, ParityRunConfig, ParityStateResult, RamseyConfig, RamseyTrace,
    RbConfig, RbKind, RbRegisterResult, RbReport, ReadoutCal, XxxxRealization,
};
pub use qsim::{DensityMatrix, KrausChannel, Pauli, PauliString, StateVector};
pub use rng::SeedStream;
pub use schedule::{
    build_cnot, build_ecr_2pulse, build_ecr_4pulse, frame_report, simulate_schedule, EchoedCr,
    EcrVariant, FrameReport, NoiseToggles, Pulse, PulseAxis, PulseSchedule, Segment, SegmentKind,
};
