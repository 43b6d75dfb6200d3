//! Target-Hamiltonian compilation into analog-block circuits, the banged-time
//! transform, and the odd-body cancellation pass.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate, Instruction, Paradigm};
use crate::error::{DaqcError, Result};
use crate::hamiltonian::{Connectivity, HamiltonianRole, IsingHamiltonian};
use crate::signs::{build_joint_matrix_mbody, build_sign_matrix_general, triangular_placements};
use crate::solve::{
    normalize_g, phase_branch_lower, phase_branch_nonneg, solve_times_for_g, solve_times_star,
};

/// Scheduling protocol family.
///
/// `General` realizes any invertible sign pattern with one X^m X^n-sandwiched
/// block per coupling tuple (joint-matrix form when higher-body tuples are
/// present). `Ordered` realizes the triangular sign matrix, which admits the
/// closed-form solve and the minimal block count; it requires a connectivity
/// on which single couplings can be flipped in isolation (star, chain).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    General,
    Ordered,
}

impl std::str::FromStr for Protocol {
    type Err = DaqcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Protocol::General),
            "star" | "ordered" => Ok(Protocol::Ordered),
            other => Err(DaqcError::InvalidInput(format!("unknown protocol '{other}'"))),
        }
    }
}

/// How the banged transform treats blocks too short for their corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BangPolicy {
    /// Fail with the offending block index.
    Strict,
    /// Clamp the block to zero and shift the unpaid correction onto its
    /// neighbours, keeping the total analog exposure exact; the single-qubit
    /// pulses then overlap the short block.
    Overlap,
}

#[derive(Debug, Clone)]
pub struct CompileOptions {
    pub protocol: Protocol,
    pub paradigm: Paradigm,
    /// Cancel literally adjacent X·X pairs on the same qubit.
    pub peephole: bool,
    /// Single-qubit gate time used by the banged transform.
    pub sqg_time_s: f64,
    pub bang_policy: BangPolicy,
}

impl CompileOptions {
    pub fn new(protocol: Protocol, paradigm: Paradigm) -> Self {
        CompileOptions {
            protocol,
            paradigm,
            peephole: true,
            sqg_time_s: crate::defaults::SQG_TIME,
            bang_policy: BangPolicy::Overlap,
        }
    }
}

/// Per-compile accounting.
#[derive(Debug, Clone, Default)]
pub struct CompileDiagnostics {
    pub negative_times: bool,
    pub dropped_zero_blocks: usize,
    pub x_count_pre_peephole: usize,
    /// Couplings whose phase was moved to the adjacent branch by the ordered
    /// protocol's normalization.
    pub branch_shifted: Vec<usize>,
}

impl CompileDiagnostics {
    fn absorb(&mut self, other: &CompileDiagnostics) {
        self.negative_times |= other.negative_times;
        self.dropped_zero_blocks += other.dropped_zero_blocks;
        self.x_count_pre_peephole += other.x_count_pre_peephole;
        self.branch_shifted.extend(other.branch_shifted.iter().copied());
    }
}

/// One step of a digital-analog program: a layer of single-qubit gates or a
/// target-Hamiltonian evolution exp(-i t_f H).
#[derive(Debug, Clone)]
pub enum ProgramStep {
    Sqg(Vec<(Gate, usize)>),
    Target { hamiltonian: IsingHamiltonian, tf_s: f64 },
}

/// Compile one target Hamiltonian evolution exp(-i t_f H) against a resource.
pub fn compile_target(
    target: &IsingHamiltonian,
    resource: &IsingHamiltonian,
    tf_s: f64,
    options: &CompileOptions,
) -> Result<(Circuit, CompileDiagnostics)> {
    let steps = vec![ProgramStep::Target { hamiltonian: target.clone(), tf_s }];
    compile_program(&steps, resource, options)
}

/// Compile a full program (SQG layers interleaved with target evolutions).
pub fn compile_program(
    steps: &[ProgramStep],
    resource: &IsingHamiltonian,
    options: &CompileOptions,
) -> Result<(Circuit, CompileDiagnostics)> {
    let n = resource.connectivity().num_qubits();
    let mut circuit = Circuit::new(n, Paradigm::Sdaqc);
    circuit.resource = Some(resource.clone());
    let mut diags = CompileDiagnostics::default();
    for step in steps {
        match step {
            ProgramStep::Sqg(layer) => {
                for &(gate, q) in layer {
                    circuit.push(Instruction::sqg(gate, q));
                }
            }
            ProgramStep::Target { hamiltonian, tf_s } => {
                let (ins, d) = emit_target(hamiltonian, resource, *tf_s, options)?;
                diags.absorb(&d);
                circuit.instructions.extend(ins);
            }
        }
    }
    if options.peephole {
        circuit.instructions = peephole_x(circuit.instructions);
    }
    if options.paradigm == Paradigm::Bdaqc {
        circuit = bang_transform(&circuit, options.sqg_time_s, options.bang_policy)?;
    }
    Ok((circuit, diags))
}

fn emit_target(
    target: &IsingHamiltonian,
    resource: &IsingHamiltonian,
    tf_s: f64,
    options: &CompileOptions,
) -> Result<(Vec<Instruction>, CompileDiagnostics)> {
    if target.connectivity() != resource.connectivity() {
        return Err(DaqcError::ConnectivityMismatch);
    }
    match options.protocol {
        Protocol::General => emit_general(target, resource, tf_s, options),
        Protocol::Ordered => emit_ordered(target, resource, tf_s, options),
    }
}

/// General protocol: one block per coupling tuple, X sandwich on that tuple.
fn emit_general(
    target: &IsingHamiltonian,
    resource: &IsingHamiltonian,
    tf_s: f64,
    options: &CompileOptions,
) -> Result<(Vec<Instruction>, CompileDiagnostics)> {
    let conn = resource.connectivity();
    let m = if conn.higher_tuples().is_empty() {
        build_sign_matrix_general(conn)?
    } else {
        build_joint_matrix_mbody(conn)
    };
    // Coupling ratios with the paradigm's phase branch applied.
    let gbars = resource.coefficients();
    let mut g = Vec::with_capacity(conn.len());
    for (beta, (&gt, &gb)) in target.coefficients().iter().zip(gbars).enumerate() {
        if gb == 0.0 {
            return Err(DaqcError::InvalidInput(format!(
                "resource coefficient {beta} is zero"
            )));
        }
        let phi = gt * tf_s;
        let phi = match options.paradigm {
            // the banged solve needs strictly positive exposure on every
            // coupling, so take the lower branch throughout
            Paradigm::Bdaqc => phase_branch_lower(phi),
            // otherwise only negative phases move, to the nonnegative branch
            _ if phi < 0.0 => phase_branch_nonneg(phi),
            _ => phi,
        };
        g.push(phi / (gb * tf_s));
    }
    let solve = solve_times_for_g(&m, &g, tf_s)?;
    if options.paradigm == Paradigm::Bdaqc && solve.negative_times {
        let (block, &t) = solve
            .times_s
            .iter()
            .enumerate()
            .find(|(_, &t)| t < 0.0)
            .expect("negative flag");
        return Err(DaqcError::NegativeBlockTime { block, time_s: t });
    }
    let mut out = Vec::new();
    let mut xcount = 0usize;
    for (alpha, &t) in solve.times_s.iter().enumerate() {
        if t == 0.0 {
            continue;
        }
        let sandwich = &m.placements[alpha];
        // closing emitted in reverse so shared qubits of consecutive blocks
        // sit back-to-back for the peephole
        for &q in sandwich.iter() {
            out.push(Instruction::sqg(Gate::X, q));
        }
        out.push(Instruction::Analog { duration_s: t });
        for &q in sandwich.iter().rev() {
            out.push(Instruction::sqg(Gate::X, q));
        }
        xcount += 2 * sandwich.len();
    }
    let diags = CompileDiagnostics {
        negative_times: solve.negative_times,
        dropped_zero_blocks: solve.dropped_zero_blocks,
        x_count_pre_peephole: xcount,
        branch_shifted: Vec::new(),
    };
    Ok((out, diags))
}

/// Ordered protocol: triangular sign matrix, minimal X dressing.
///
/// Consecutive blocks share most of their flip sets, so instead of a full
/// sandwich per block the emitted layers are the symmetric differences of
/// consecutive flip sets (single-X columns between blocks).
fn emit_ordered(
    target: &IsingHamiltonian,
    resource: &IsingHamiltonian,
    tf_s: f64,
    _options: &CompileOptions,
) -> Result<(Vec<Instruction>, CompileDiagnostics)> {
    let conn = resource.connectivity();
    if !conn.higher_tuples().is_empty() {
        return Err(DaqcError::UnsupportedProtocol(
            "ordered protocol handles 2-body connectivities".into(),
        ));
    }
    let norm = normalize_g(target, resource, tf_s)?;
    let solve = solve_times_star(&norm.g_desc, tf_s)?;
    let c = conn.len();
    // Flip set per block, in the sorted coupling order.
    let flip_sets: Vec<BTreeSet<usize>> = if conn.is_star() {
        (0..c)
            .map(|alpha| {
                ((alpha + 1)..c)
                    .map(|rank| conn.pairs()[norm.permutation[rank]].1)
                    .collect()
            })
            .collect()
    } else {
        triangular_placements(conn, &norm.permutation)?
            .into_iter()
            .map(|v| v.into_iter().collect())
            .collect()
    };
    let mut out = Vec::new();
    let mut xcount = 0usize;
    let mut prev: BTreeSet<usize> = BTreeSet::new();
    for alpha in 0..c {
        if solve.times_s[alpha] == 0.0 {
            continue;
        }
        let layer: Vec<usize> = prev.symmetric_difference(&flip_sets[alpha]).cloned().collect();
        xcount += layer.len();
        for q in layer {
            out.push(Instruction::sqg(Gate::X, q));
        }
        out.push(Instruction::Analog { duration_s: solve.times_s[alpha] });
        prev = flip_sets[alpha].clone();
    }
    xcount += prev.len();
    for &q in prev.iter() {
        out.push(Instruction::sqg(Gate::X, q));
    }
    let diags = CompileDiagnostics {
        negative_times: solve.negative_times,
        dropped_zero_blocks: solve.dropped_zero_blocks,
        x_count_pre_peephole: xcount,
        branch_shifted: norm.shifted,
    };
    Ok((out, diags))
}

/// Cancel literally adjacent X·X pairs on the same qubit.
pub fn peephole_x(instructions: Vec<Instruction>) -> Vec<Instruction> {
    let mut out: Vec<Instruction> = Vec::with_capacity(instructions.len());
    for ins in instructions {
        let cancels = matches!(
            (&ins, out.last()),
            (
                Instruction::Sqg { gate: Gate::X, qubit: q1 },
                Some(Instruction::Sqg { gate: Gate::X, qubit: q2 })
            ) if q1 == q2
        );
        if cancels {
            out.pop();
        } else {
            out.push(ins);
        }
    }
    out
}

/// Convert a stepwise circuit into a banged one by debiting the analog
/// exposure consumed while single-qubit pulses overlap the always-on
/// evolution.
///
/// Every physical single-qubit layer keeps the resource Hamiltonian running
/// for one gate time, so each layer cluster charges (layers · Δt), split
/// evenly between the neighbouring blocks; clusters at the circuit edges
/// charge their single neighbour in full. A lone layer between two blocks
/// charges Δt/2 to each, giving the boundary correction t - (3/2)Δt and the
/// central correction t - Δt of the standard transform.
pub fn bang_transform(circuit: &Circuit, sqg_time_s: f64, policy: BangPolicy) -> Result<Circuit> {
    #[derive(Debug)]
    enum Item {
        Layers(usize),
        Block(usize), // instruction index
    }
    if circuit.instructions.iter().any(|i| {
        !matches!(i, Instruction::Sqg { .. } | Instruction::Analog { .. })
    }) {
        return Err(DaqcError::InvalidInput(
            "banged circuits contain only single-qubit gates and analog blocks".into(),
        ));
    }
    // Partition into physical-SQG layers and blocks; virtual gates are
    // transparent. A repeated qubit terminates the running layer.
    let mut items: Vec<Item> = Vec::new();
    let mut layer_qubits: BTreeSet<usize> = BTreeSet::new();
    let push_layer = |items: &mut Vec<Item>, qs: &mut BTreeSet<usize>| {
        if !qs.is_empty() {
            match items.last_mut() {
                Some(Item::Layers(k)) => *k += 1,
                _ => items.push(Item::Layers(1)),
            }
            qs.clear();
        }
    };
    for (idx, ins) in circuit.instructions.iter().enumerate() {
        match ins {
            Instruction::Sqg { gate, qubit } if gate.is_physical() => {
                if layer_qubits.contains(qubit) {
                    push_layer(&mut items, &mut layer_qubits);
                }
                layer_qubits.insert(*qubit);
            }
            Instruction::Sqg { .. } => {}
            Instruction::Analog { .. } => {
                push_layer(&mut items, &mut layer_qubits);
                items.push(Item::Block(idx));
            }
            _ => unreachable!(),
        }
    }
    push_layer(&mut items, &mut layer_qubits);

    let block_positions: Vec<usize> = items
        .iter()
        .enumerate()
        .filter_map(|(i, it)| matches!(it, Item::Block(_)).then_some(i))
        .collect();
    if block_positions.len() < 2 {
        return Err(DaqcError::TooFewBlocksForBang { blocks: block_positions.len() });
    }

    // Charge each layer cluster to its neighbouring blocks.
    let mut corrected: Vec<f64> = block_positions
        .iter()
        .map(|&p| match items[p] {
            Item::Block(idx) => match circuit.instructions[idx] {
                Instruction::Analog { duration_s } => duration_s,
                _ => unreachable!(),
            },
            _ => unreachable!(),
        })
        .collect();
    for (i, it) in items.iter().enumerate() {
        let Item::Layers(k) = it else { continue };
        let charge = *k as f64 * sqg_time_s;
        let left = block_positions.iter().rposition(|&p| p < i);
        let right = block_positions.iter().position(|&p| p > i);
        match (left, right) {
            (Some(l), Some(r)) => {
                corrected[l] += -charge / 2.0;
                corrected[r] += -charge / 2.0;
            }
            (Some(l), None) => corrected[l] -= charge,
            (None, Some(r)) => corrected[r] -= charge,
            (None, None) => {}
        }
    }

    let tol = 1e-18;
    match policy {
        BangPolicy::Strict => {
            if let Some((block, &t)) = corrected.iter().enumerate().find(|(_, &t)| t < -tol) {
                return Err(DaqcError::NegativeBangedTime { block, time_s: t });
            }
        }
        BangPolicy::Overlap => {
            // Shift unpaid corrections onto the nearest neighbours until all
            // block times are nonnegative. Total analog exposure is preserved.
            let l = corrected.len();
            let mut guard = 0;
            while let Some(b) = (0..l)
                .filter(|&i| corrected[i] < -tol)
                .min_by(|&a, &b| corrected[a].partial_cmp(&corrected[b]).unwrap())
            {
                guard += 1;
                if guard > 20 * l {
                    break;
                }
                let deficit = -corrected[b];
                corrected[b] = 0.0;
                let left = (0..b).rev().find(|&i| corrected[i] > 0.0);
                let right = ((b + 1)..l).find(|&i| corrected[i] > 0.0);
                match (left, right) {
                    (Some(a), Some(c)) => {
                        corrected[a] -= deficit / 2.0;
                        corrected[c] -= deficit / 2.0;
                    }
                    (Some(a), None) => corrected[a] -= deficit,
                    (None, Some(c)) => corrected[c] -= deficit,
                    (None, None) => {
                        return Err(DaqcError::NegativeBangedTime { block: b, time_s: -deficit })
                    }
                }
            }
            if let Some((block, &t)) = corrected.iter().enumerate().find(|(_, &t)| t < -tol) {
                return Err(DaqcError::NegativeBangedTime { block, time_s: t });
            }
        }
    }

    let mut out = circuit.clone();
    out.paradigm = Paradigm::Bdaqc;
    let mut bi = 0;
    for ins in out.instructions.iter_mut() {
        if let Instruction::Analog { duration_s } = ins {
            *duration_s = corrected[bi].max(0.0);
            bi += 1;
        }
    }
    Ok(out)
}

/// Split an analog block into two half-time blocks, one conjugated by X on
/// every qubit, cancelling all odd-body terms of the resource Hamiltonian.
pub fn cancel_odd_body(resource: &IsingHamiltonian, duration_s: f64) -> Circuit {
    let n = resource.connectivity().num_qubits();
    let mut c = Circuit::new(n, Paradigm::Sdaqc);
    c.resource = Some(resource.clone());
    c.push(Instruction::Analog { duration_s: duration_s / 2.0 });
    for q in 0..n {
        c.push(Instruction::sqg(Gate::X, q));
    }
    c.push(Instruction::Analog { duration_s: duration_s / 2.0 });
    for q in 0..n {
        c.push(Instruction::sqg(Gate::X, q));
    }
    c
}

/// Build a target Hamiltonian on `conn` from per-tuple conjugation phases
/// Φ_tuple (realizing exp(-i Σ Φ_t Z..Z)), with evolution time t_f.
pub fn target_from_phases(
    conn: &Connectivity,
    phases: &[(Vec<usize>, f64)],
    tf_s: f64,
) -> Result<IsingHamiltonian> {
    let tuples = conn.tuples();
    let mut coeffs = vec![0.0; tuples.len()];
    for (tuple, phi) in phases {
        let idx = tuples
            .iter()
            .position(|t| t == tuple)
            .ok_or_else(|| DaqcError::InvalidInput(format!("tuple {tuple:?} not in connectivity")))?;
        coeffs[idx] = phi / tf_s;
    }
    IsingHamiltonian::new(conn.clone(), coeffs, HamiltonianRole::Target)
}

/// Conjugation phase accumulated by each coupling of a target: Φ_β = t_f g_β.
pub fn target_phases(target: &IsingHamiltonian, tf_s: f64) -> Vec<f64> {
    target.coefficients().iter().map(|&g| g * tf_s).collect()
}

/// `true` when the phase pair realizes the same two-qubit conjugation up to a
/// global sign: Φ ≡ Φ' (mod π).
pub fn phases_equivalent(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(PI);
    d < 1e-9 || (PI - d) < 1e-9
}
