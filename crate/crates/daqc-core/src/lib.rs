//! Compiler and noisy simulator for digital-analog quantum computation (DAQC)
//! on devices with a ZZ-Ising resource Hamiltonian.
//!
//! The device evolves under a fixed resource Hamiltonian
//!
//!   H̄ = Σ_{(j,k) ∈ 𝒞}  ḡ_jk · Z^j Z^k
//!
//! and the compiler synthesizes schedules of analog blocks (evolutions under H̄
//! for tunable times) interleaved with single-qubit X gates so that the overall
//! circuit realizes exp(-i t_f H) for an arbitrary ZZ-Ising target Hamiltonian H.
//! Two scheduling protocols are provided: a general one valid for any
//! connectivity (sign-matrix inversion) and an ordered one for star and chain
//! layouts (closed-form triangular solve). Circuits can be emitted in the
//! stepwise (sDAQC) or banged (bDAQC) paradigm and simulated exactly under a
//! calibrated multiplicative control-error model.

pub mod algorithms;
pub mod analysis;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod noise;
pub mod report;
pub mod signs;
pub mod simulator;
pub mod solve;

pub use circuit::{Circuit, DurationModel, Gate, Instruction, Paradigm, ScheduledCircuit};
pub use error::{DaqcError, Result};
pub use hamiltonian::{Connectivity, HamiltonianRole, IsingHamiltonian, TupleIndexMap};
pub use noise::{NoiseConfig, NoiseModel, OpClass};
pub use signs::{SignMatrix, SignMatrixKind};
pub use solve::ScheduleSolve;

/// Default device parameters: ḡ = 10 MHz, Δt = 5 ns, t_TQG = 50 ns.
pub mod defaults {
    /// Resource coupling coefficient, rad/s (10 MHz).
    pub const GBAR: f64 = 1.0e7;
    /// Single-qubit gate duration, seconds (5 ns).
    pub const SQG_TIME: f64 = 5.0e-9;
    /// Two-qubit gate duration, seconds (50 ns).
    pub const TQG_TIME: f64 = 50.0e-9;
    /// Monte-Carlo iterations for experiment sweeps.
    pub const ITERATIONS: usize = 1000;
    /// Calibration draws for per-operation fidelity targets.
    pub const CALIBRATION_TRIALS: usize = 10_000;
    /// Per-operation average fidelity targets.
    pub const SQG_FIDELITY: f64 = 0.9999;
    pub const TQG_FIDELITY: f64 = 0.999;
    pub const ANALOG_TERM_FIDELITY: f64 = 0.9995;
    /// Coherent (systematic) share of each operation's infidelity budget.
    pub const COHERENT_FRACTION: f64 = 0.25;
    /// Dense-simulation qubit cap.
    pub const SIM_QUBIT_CAP: usize = 12;
}
