//! Circuit intermediate representation and duration accounting.
//!
//! Circuits are flat instruction lists over three operation classes: native
//! single-qubit gates, native two-qubit gates (ZZ phase gates, plus a swap used
//! by digital routing), and analog blocks (whole-device evolutions under the
//! resource Hamiltonian). A paradigm tag records whether the circuit is meant
//! as digital, stepwise digital-analog or banged digital-analog.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{DaqcError, Result};
use crate::hamiltonian::IsingHamiltonian;

/// Native and composite single-qubit gates.
///
/// X, H, S and S† are kept symbolically in the IR and lowered to the device
/// set {Rxy, Rz} at schedule/simulation time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    X,
    H,
    S,
    Sdg,
    Rz { theta: f64 },
    Rxy { theta: f64, phi: f64 },
}

impl Gate {
    /// Lower to the native set. Returns (physical Rxy pulse, virtual Rz), either
    /// of which may be absent. Lowering identities (up to global phase):
    ///   X  = Rxy(π, 0)
    ///   H  = Rz(π) · Rxy(π/2, -π/2)
    ///   S  = Rz(π/2),  S† = Rz(-π/2)
    pub fn lower(self) -> (Option<(f64, f64)>, Option<f64>) {
        match self {
            Gate::X => (Some((PI, 0.0)), None),
            Gate::H => (Some((PI / 2.0, -PI / 2.0)), Some(PI)),
            Gate::S => (None, Some(PI / 2.0)),
            Gate::Sdg => (None, Some(-PI / 2.0)),
            Gate::Rz { theta } => (None, Some(theta)),
            Gate::Rxy { theta, phi } => (Some((theta, phi)), None),
        }
    }

    /// True when the gate needs a physical pulse (Rz-likes are virtual).
    pub fn is_physical(self) -> bool {
        self.lower().0.is_some()
    }
}

/// A single timed operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Instruction {
    Sqg {
        qubit: usize,
        #[serde(flatten)]
        gate: Gate,
    },
    /// ZZ(φ) = exp(i φ Z^j Z^k); φ is kept in (-2π, 2π].
    Zz { qubits: (usize, usize), phi: f64 },
    /// Native two-qubit swap, exp(-i π/4 (XX+YY+ZZ)) up to global phase.
    /// Used by digital routing on restricted connectivities; takes one
    /// two-qubit-gate time slot.
    Swap { qubits: (usize, usize) },
    /// Whole-device evolution exp(-i t H̄) under the circuit's resource
    /// Hamiltonian. Negative durations are representable (the general
    /// schedule solve can produce them) and flagged downstream.
    Analog { duration_s: f64 },
    /// Analog block after a realized noise draw: the runtime is already
    /// perturbed and each resource coupling carries a scale factor.
    PerturbedAnalog { duration_s: f64, coupling_scales: Vec<f64> },
    /// Native swap after a realized noise draw (joint phase scaled).
    PerturbedSwap { qubits: (usize, usize), phase_scale: f64 },
}

impl Instruction {
    pub fn sqg(gate: Gate, qubit: usize) -> Self {
        Instruction::Sqg { qubit, gate }
    }

    pub fn zz(j: usize, k: usize, phi: f64) -> Self {
        Instruction::Zz { qubits: (j, k), phi }
    }

    /// Qubits the instruction occupies. Analog blocks occupy the whole device.
    pub fn qubits(&self, num_qubits: usize) -> Vec<usize> {
        match self {
            Instruction::Sqg { qubit, .. } => vec![*qubit],
            Instruction::Zz { qubits, .. }
            | Instruction::Swap { qubits }
            | Instruction::PerturbedSwap { qubits, .. } => {
                vec![qubits.0, qubits.1]
            }
            Instruction::Analog { .. } | Instruction::PerturbedAnalog { .. } => {
                (0..num_qubits).collect()
            }
        }
    }
}

/// Computation paradigm of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Paradigm {
    Dqc,
    Sdaqc,
    Bdaqc,
}

impl Paradigm {
    pub fn as_str(self) -> &'static str {
        match self {
            Paradigm::Dqc => "dqc",
            Paradigm::Sdaqc => "sdaqc",
            Paradigm::Bdaqc => "bdaqc",
        }
    }
}

impl std::str::FromStr for Paradigm {
    type Err = DaqcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dqc" => Ok(Paradigm::Dqc),
            "sdaqc" => Ok(Paradigm::Sdaqc),
            "bdaqc" => Ok(Paradigm::Bdaqc),
            other => Err(DaqcError::InvalidInput(format!("unknown paradigm '{other}'"))),
        }
    }
}

/// Free-form provenance: algorithm name, size, compile options, and for
/// routed circuits the final logical→physical layout.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_layout: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
}

/// An ordered instruction list with paradigm tag and (for circuits containing
/// analog blocks) the resource Hamiltonian the blocks evolve under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub paradigm: Paradigm,
    pub instructions: Vec<Instruction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<IsingHamiltonian>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl Circuit {
    pub fn new(num_qubits: usize, paradigm: Paradigm) -> Self {
        Circuit {
            num_qubits,
            paradigm,
            instructions: Vec::new(),
            resource: None,
            metadata: Metadata::default(),
        }
    }

    pub fn push(&mut self, ins: Instruction) {
        self.instructions.push(ins);
    }

    pub fn analog_block_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| {
                matches!(i, Instruction::Analog { .. } | Instruction::PerturbedAnalog { .. })
            })
            .count()
    }

    pub fn analog_durations(&self) -> Vec<f64> {
        self.instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Analog { duration_s }
                | Instruction::PerturbedAnalog { duration_s, .. } => Some(*duration_s),
                _ => None,
            })
            .collect()
    }

    /// Count of physical single-qubit pulses after lowering.
    pub fn sqg_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Sqg { gate, .. } if gate.is_physical()))
            .count()
    }

    pub fn tqg_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| {
                matches!(
                    i,
                    Instruction::Zz { .. }
                        | Instruction::Swap { .. }
                        | Instruction::PerturbedSwap { .. }
                )
            })
            .count()
    }

    /// Validate qubit ranges and the ZZ phase window.
    pub fn validate(&self) -> Result<()> {
        for (i, ins) in self.instructions.iter().enumerate() {
            for q in ins.qubits(self.num_qubits) {
                if q >= self.num_qubits {
                    return Err(DaqcError::InvalidInput(format!(
                        "instruction {i} touches qubit {q} on a {}-qubit circuit",
                        self.num_qubits
                    )));
                }
            }
            match ins {
                Instruction::Zz { phi, .. } => {
                    if !(*phi > -2.0 * PI && *phi <= 2.0 * PI) {
                        return Err(DaqcError::InvalidInput(format!(
                            "instruction {i}: ZZ phase {phi} outside (-2π, 2π]"
                        )));
                    }
                }
                Instruction::Analog { duration_s }
                | Instruction::PerturbedAnalog { duration_s, .. } => {
                    if !duration_s.is_finite() {
                        return Err(DaqcError::InvalidInput(format!(
                            "instruction {i}: non-finite analog duration"
                        )));
                    }
                    if self.resource.is_none() {
                        return Err(DaqcError::InvalidInput(
                            "analog block without a resource Hamiltonian".into(),
                        ));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Circuit =
            serde_json::from_str(s).map_err(|e| DaqcError::InvalidInput(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Plain-text wire diagram for docs and debugging.
    pub fn diagram(&self) -> String {
        let mut rows: Vec<String> = (0..self.num_qubits).map(|q| format!("q{q}: ")).collect();
        let pad = |rows: &mut Vec<String>| {
            let w = rows.iter().map(|r| r.len()).max().unwrap_or(0);
            for r in rows.iter_mut() {
                while r.len() < w {
                    r.push('─');
                }
            }
        };
        for ins in &self.instructions {
            pad(&mut rows);
            match ins {
                Instruction::Sqg { qubit, gate } => {
                    let label = match gate {
                        Gate::X => "[X]".to_string(),
                        Gate::H => "[H]".to_string(),
                        Gate::S => "[S]".to_string(),
                        Gate::Sdg => "[S†]".to_string(),
                        Gate::Rz { theta } => format!("[Rz {theta:.3}]"),
                        Gate::Rxy { theta, phi } => format!("[Rxy {theta:.3},{phi:.3}]"),
                    };
                    rows[*qubit].push_str(&label);
                }
                Instruction::Zz { qubits, phi } => {
                    rows[qubits.0].push_str(&format!("[ZZ {phi:.3}]"));
                    rows[qubits.1].push_str("[●]");
                }
                Instruction::Swap { qubits } | Instruction::PerturbedSwap { qubits, .. } => {
                    rows[qubits.0].push_str("[x]");
                    rows[qubits.1].push_str("[x]");
                }
                Instruction::Analog { duration_s }
                | Instruction::PerturbedAnalog { duration_s, .. } => {
                    pad(&mut rows);
                    let label = format!("[A {:.2}ns]", duration_s * 1e9);
                    for r in rows.iter_mut() {
                        r.push_str(&label);
                    }
                }
            }
        }
        pad(&mut rows);
        rows.join("\n")
    }
}

/// Gate timing used by the scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationModel {
    pub sqg_time_s: f64,
    pub tqg_time_s: f64,
    /// When set, Rz (and S/S†) cost zero time: they are phase-frame updates.
    pub rz_virtual: bool,
}

impl Default for DurationModel {
    fn default() -> Self {
        DurationModel {
            sqg_time_s: crate::defaults::SQG_TIME,
            tqg_time_s: crate::defaults::TQG_TIME,
            rz_virtual: true,
        }
    }
}

impl DurationModel {
    pub fn instruction_duration(&self, ins: &Instruction) -> f64 {
        match ins {
            Instruction::Sqg { gate, .. } => {
                if gate.is_physical() {
                    self.sqg_time_s
                } else if self.rz_virtual {
                    0.0
                } else {
                    self.sqg_time_s
                }
            }
            Instruction::Zz { .. }
            | Instruction::Swap { .. }
            | Instruction::PerturbedSwap { .. } => self.tqg_time_s,
            Instruction::Analog { duration_s }
            | Instruction::PerturbedAnalog { duration_s, .. } => duration_s.abs(),
        }
    }
}

/// A circuit with per-instruction start times filled in.
#[derive(Debug, Clone)]
pub struct ScheduledCircuit {
    pub circuit: Circuit,
    pub start_times_s: Vec<f64>,
    pub total_duration_s: f64,
}

/// Greedy as-soon-as-possible scheduling.
///
/// Gates on disjoint qubits run concurrently; analog blocks occupy every
/// qubit; virtual gates take zero time. Idempotent: rescheduling a scheduled
/// circuit reproduces the same start times.
pub fn schedule(circuit: &Circuit, durations: &DurationModel) -> Result<ScheduledCircuit> {
    circuit.validate()?;
    let mut free = vec![0.0f64; circuit.num_qubits];
    let mut starts = Vec::with_capacity(circuit.instructions.len());
    let mut total = 0.0f64;
    for ins in &circuit.instructions {
        let qs = ins.qubits(circuit.num_qubits);
        let start = qs.iter().map(|&q| free[q]).fold(0.0, f64::max);
        let dur = durations.instruction_duration(ins);
        for q in qs {
            free[q] = start + dur;
        }
        starts.push(start);
        total = total.max(start + dur);
    }
    Ok(ScheduledCircuit { circuit: circuit.clone(), start_times_s: starts, total_duration_s: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Connectivity, IsingHamiltonian};

    fn dm() -> DurationModel {
        DurationModel::default()
    }

    #[test]
    fn empty_circuit_has_zero_duration() {
        let c = Circuit::new(3, Paradigm::Dqc);
        let s = schedule(&c, &dm()).unwrap();
        assert_eq!(s.total_duration_s, 0.0);
    }

    #[test]
    fn serial_chain_of_zz_gates() {
        // N-1 ZZ gates all touching qubit 0 cannot parallelize.
        let n = 5;
        let mut c = Circuit::new(n, Paradigm::Dqc);
        for k in 1..n {
            c.push(Instruction::zz(0, k, 0.3));
        }
        let s = schedule(&c, &dm()).unwrap();
        assert!((s.total_duration_s - (n - 1) as f64 * 50e-9).abs() < 1e-15);
    }

    #[test]
    fn disjoint_gates_run_concurrently() {
        let mut c = Circuit::new(4, Paradigm::Dqc);
        c.push(Instruction::zz(0, 1, 0.1));
        c.push(Instruction::zz(2, 3, 0.1));
        let s = schedule(&c, &dm()).unwrap();
        assert!((s.total_duration_s - 50e-9).abs() < 1e-15);
        assert_eq!(s.start_times_s, vec![0.0, 0.0]);
    }

    #[test]
    fn rz_is_virtual_x_is_not() {
        let mut c = Circuit::new(1, Paradigm::Dqc);
        c.push(Instruction::sqg(Gate::Rz { theta: 1.0 }, 0));
        c.push(Instruction::sqg(Gate::S, 0));
        let s = schedule(&c, &dm()).unwrap();
        assert_eq!(s.total_duration_s, 0.0);
        c.push(Instruction::sqg(Gate::X, 0));
        let s = schedule(&c, &dm()).unwrap();
        assert!((s.total_duration_s - 5e-9).abs() < 1e-18);
    }

    #[test]
    fn analog_blocks_occupy_all_qubits() {
        let conn = Connectivity::star(3).unwrap();
        let res = IsingHamiltonian::homogeneous_resource(conn, 1e7).unwrap();
        let mut c = Circuit::new(3, Paradigm::Sdaqc);
        c.resource = Some(res);
        c.push(Instruction::sqg(Gate::X, 2));
        c.push(Instruction::Analog { duration_s: 20e-9 });
        c.push(Instruction::sqg(Gate::X, 1));
        let s = schedule(&c, &dm()).unwrap();
        // X(2) at 0, analog at 5ns..25ns, X(1) at 25ns
        assert_eq!(s.start_times_s, vec![0.0, 5e-9, 25e-9]);
        assert!((s.total_duration_s - 30e-9).abs() < 1e-18);
    }

    #[test]
    fn schedule_is_idempotent() {
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::sqg(Gate::H, 0));
        c.push(Instruction::zz(0, 1, 0.7));
        let s1 = schedule(&c, &dm()).unwrap();
        let s2 = schedule(&s1.circuit, &dm()).unwrap();
        assert_eq!(s1.start_times_s, s2.start_times_s);
        assert_eq!(s1.total_duration_s, s2.total_duration_s);
    }

    #[test]
    fn negative_analog_duration_is_representable() {
        let conn = Connectivity::star(2).unwrap();
        let res = IsingHamiltonian::homogeneous_resource(conn, 1e7).unwrap();
        let mut c = Circuit::new(2, Paradigm::Sdaqc);
        c.resource = Some(res);
        c.push(Instruction::Analog { duration_s: -10e-9 });
        assert!(c.validate().is_ok());
        // scheduling uses |t|
        let s = schedule(&c, &dm()).unwrap();
        assert!((s.total_duration_s - 10e-9).abs() < 1e-18);
    }

    #[test]
    fn json_roundtrip() {
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::sqg(Gate::H, 0));
        c.push(Instruction::sqg(Gate::Rxy { theta: 1.2, phi: 0.4 }, 1));
        c.push(Instruction::zz(0, 1, -0.5));
        c.push(Instruction::Swap { qubits: (0, 1) });
        c.metadata.algorithm = Some("demo".into());
        let j = c.to_json();
        let back = Circuit::from_json(&j).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn validate_rejects_out_of_range() {
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::zz(0, 2, 0.1));
        assert!(c.validate().is_err());
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::zz(0, 1, 7.0));
        assert!(c.validate().is_err());
    }

    #[test]
    fn diagram_renders() {
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::sqg(Gate::H, 0));
        c.push(Instruction::zz(0, 1, 0.785));
        let d = c.diagram();
        assert!(d.contains("[H]"));
        assert!(d.contains("[ZZ"));
        assert_eq!(d.lines().count(), 2);
    }
}
