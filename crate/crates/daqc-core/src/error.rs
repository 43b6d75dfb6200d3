//! Error type shared across the crate.

use std::fmt;

pub type Result<T> = std::result::Result<T, DaqcError>;

#[derive(Debug, Clone, PartialEq)]
pub enum DaqcError {
    /// Malformed connectivity or Hamiltonian definition.
    InvalidInput(String),
    /// Sign matrix is numerically singular; no block times exist.
    SingularSignMatrix { size: usize, smallest_sv: f64 },
    /// Target and resource Hamiltonians live on different connectivities.
    ConnectivityMismatch,
    /// The requested protocol cannot realize the required sign pattern.
    UnsupportedProtocol(String),
    /// Banged compilation produced a negative corrected block time.
    NegativeBangedTime { block: usize, time_s: f64 },
    /// Banged compilation requires at least two analog blocks.
    TooFewBlocksForBang { blocks: usize },
    /// The block-time solve produced negative times where they are forbidden.
    NegativeBlockTime { block: usize, time_s: f64 },
    /// Simulation dimension above the dense cap.
    DimensionCap { qubits: usize, cap: usize },
    /// Matrix or state dimensions do not match.
    DimensionMismatch { left: usize, right: usize },
    /// Iterative procedure (calibration, fit) failed to converge.
    NoConvergence(String),
}

impl fmt::Display for DaqcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DaqcError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            DaqcError::SingularSignMatrix { size, smallest_sv } => write!(
                f,
                "sign matrix ({size}x{size}) is singular (smallest singular value {smallest_sv:.3e})"
            ),
            DaqcError::ConnectivityMismatch => {
                write!(f, "target and resource connectivities differ")
            }
            DaqcError::UnsupportedProtocol(msg) => write!(f, "unsupported protocol: {msg}"),
            DaqcError::NegativeBangedTime { block, time_s } => write!(
                f,
                "banged time of analog block {block} is negative ({:.3} ns)",
                time_s * 1e9
            ),
            DaqcError::TooFewBlocksForBang { blocks } => {
                write!(f, "banged paradigm needs at least 2 analog blocks, got {blocks}")
            }
            DaqcError::NegativeBlockTime { block, time_s } => write!(
                f,
                "analog block {block} has negative runtime ({:.3} ns)",
                time_s * 1e9
            ),
            DaqcError::DimensionCap { qubits, cap } => {
                write!(f, "{qubits} qubits exceeds dense simulation cap of {cap}")
            }
            DaqcError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            DaqcError::NoConvergence(msg) => write!(f, "no convergence: {msg}"),
        }
    }
}

impl std::error::Error for DaqcError {}
