//! Exact dense simulation of circuits and fidelity metrics.
//!
//! Analog blocks and ZZ gates are diagonal in the computational basis and are
//! applied as elementwise phase updates; single-qubit gates as structured 2x2
//! updates. The banged-overlap mode additionally composes exp(-iΔt(H̄ + H_s))
//! windows with dense matrix exponentials for studying the non-commutativity
//! error; the Monte-Carlo harness does not use it (control noise and the
//! intrinsic banged error are accounted separately, the latter analytically).

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, Instruction};
use crate::error::{DaqcError, Result};
use crate::hamiltonian::IsingHamiltonian;
use crate::linalg::{z_string_diag, CMat, C64, ONE, ZERO};

/// 2x2 matrix of a lowered single-qubit gate.
pub fn gate_matrix(gate: Gate) -> [[C64; 2]; 2] {
    let (pulse, rz) = gate.lower();
    let mut m = [[ONE, ZERO], [ZERO, ONE]];
    if let Some((theta, phi)) = pulse {
        m = rxy_matrix(theta, phi);
    }
    if let Some(theta) = rz {
        let rzm = rz_matrix(theta);
        m = mul2(&rzm, &m);
    }
    m
}

pub fn rxy_matrix(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    // exp(-i θ/2 (cosφ X + sinφ Y))
    [
        [C64::new(c, 0.0), C64::new(-s * phi.sin(), -s * phi.cos())],
        [C64::new(s * phi.sin(), -s * phi.cos()), C64::new(c, 0.0)],
    ]
}

pub fn rz_matrix(theta: f64) -> [[C64; 2]; 2] {
    [
        [C64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, C64::from_polar(1.0, theta / 2.0)],
    ]
}

fn mul2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Diagonal of the resource Hamiltonian (rad/s per basis state).
pub fn hamiltonian_diag(h: &IsingHamiltonian) -> Vec<f64> {
    let n = h.connectivity().num_qubits();
    let dim = 1usize << n;
    let mut d = vec![0.0; dim];
    for (tuple, &g) in h.connectivity().tuples().iter().zip(h.coefficients()) {
        let zs = z_string_diag(tuple, n);
        for i in 0..dim {
            d[i] += g * zs[i];
        }
    }
    d
}

/// Per-tuple scaled-coefficient diagonals for simulating perturbed blocks.
struct ResourceDiags {
    /// Hamiltonian diagonal with nominal coefficients.
    nominal: Vec<f64>,
    /// Per-tuple g·(Z-string) diagonals.
    per_tuple: Vec<Vec<f64>>,
}

impl ResourceDiags {
    fn build(h: &IsingHamiltonian) -> Self {
        let n = h.connectivity().num_qubits();
        let per_tuple: Vec<Vec<f64>> = h
            .connectivity()
            .tuples()
            .iter()
            .zip(h.coefficients())
            .map(|(tuple, &g)| z_string_diag(tuple, n).into_iter().map(|z| g * z).collect())
            .collect();
        let dim = 1usize << n;
        let mut nominal = vec![0.0; dim];
        for td in &per_tuple {
            for i in 0..dim {
                nominal[i] += td[i];
            }
        }
        ResourceDiags { nominal, per_tuple }
    }

    fn scaled(&self, scales: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.nominal.len()];
        for (td, &s) in self.per_tuple.iter().zip(scales) {
            for i in 0..d.len() {
                d[i] += s * td[i];
            }
        }
        d
    }
}

/// Phase diagonal of exp(i phi Z^j Z^k).
fn zz_phase_diag(j: usize, k: usize, phi: f64, n: usize) -> Vec<C64> {
    z_string_diag(&[j, k], n)
        .into_iter()
        .map(|s| C64::from_polar(1.0, phi * s))
        .collect()
}

/// Dense matrix of the native two-qubit swap on (a, b):
/// exp(-i π/4 (XX + YY + ZZ)), equal to SWAP up to global phase.
pub fn swap_unitary(n: usize, a: usize, b: usize, phase_scale: f64) -> CMat {
    // generator XX+YY+ZZ embedded on (a, b)
    let dim = 1usize << n;
    let mut gen = CMat::zeros(dim);
    let pa = 1usize << (n - 1 - a);
    let pb = 1usize << (n - 1 - b);
    for i in 0..dim {
        let ba = (i & pa != 0) as u8;
        let bb = (i & pb != 0) as u8;
        // ZZ diagonal
        let zz = if ba == bb { 1.0 } else { -1.0 };
        gen.set(i, i, gen.get(i, i) + C64::new(zz, 0.0));
        // XX+YY maps |01> <-> |10> with amplitude 2
        if ba != bb {
            let j = i ^ pa ^ pb;
            gen.set(i, j, gen.get(i, j) + C64::new(2.0, 0.0));
        }
    }
    gen.scale(C64::new(0.0, -std::f64::consts::FRAC_PI_4 * phase_scale));
    gen.expm()
}

fn check_cap(n: usize) -> Result<()> {
    if n > crate::defaults::SIM_QUBIT_CAP {
        return Err(DaqcError::DimensionCap { qubits: n, cap: crate::defaults::SIM_QUBIT_CAP });
    }
    Ok(())
}

/// Time-ordered product of the circuit's instruction unitaries.
pub fn simulate_unitary(circuit: &Circuit) -> Result<CMat> {
    check_cap(circuit.num_qubits)?;
    circuit.validate()?;
    let n = circuit.num_qubits;
    let diags = circuit.resource.as_ref().map(ResourceDiags::build);
    let mut u = CMat::identity(1 << n);
    for ins in &circuit.instructions {
        match ins {
            Instruction::Sqg { qubit, gate } => {
                u.apply_sqg_left(n, *qubit, &gate_matrix(*gate));
            }
            Instruction::Zz { qubits, phi } => {
                let d = zz_phase_diag(qubits.0, qubits.1, *phi, n);
                u.apply_diag_left(&d);
            }
            Instruction::Swap { qubits } => {
                let sw = swap_unitary(n, qubits.0, qubits.1, 1.0);
                u = sw.matmul(&u);
            }
            Instruction::PerturbedSwap { qubits, phase_scale } => {
                let sw = swap_unitary(n, qubits.0, qubits.1, *phase_scale);
                u = sw.matmul(&u);
            }
            Instruction::Analog { duration_s } => {
                let d = &diags.as_ref().expect("resource").nominal;
                let phases: Vec<C64> =
                    d.iter().map(|&e| C64::from_polar(1.0, -e * duration_s)).collect();
                u.apply_diag_left(&phases);
            }
            Instruction::PerturbedAnalog { duration_s, coupling_scales } => {
                let d = diags.as_ref().expect("resource").scaled(coupling_scales);
                let phases: Vec<C64> =
                    d.iter().map(|&e| C64::from_polar(1.0, -e * duration_s)).collect();
                u.apply_diag_left(&phases);
            }
        }
    }
    Ok(u)
}

/// Final state of the circuit applied to |0...0⟩.
pub fn simulate_state(circuit: &Circuit) -> Result<Vec<C64>> {
    check_cap(circuit.num_qubits)?;
    circuit.validate()?;
    let n = circuit.num_qubits;
    let dim = 1usize << n;
    let diags = circuit.resource.as_ref().map(ResourceDiags::build);
    let mut v = vec![ZERO; dim];
    v[0] = ONE;
    for ins in &circuit.instructions {
        match ins {
            Instruction::Sqg { qubit, gate } => {
                let g = gate_matrix(*gate);
                let mask = 1usize << (n - 1 - qubit);
                for i in 0..dim {
                    if i & mask != 0 {
                        continue;
                    }
                    let j = i | mask;
                    let (a, b) = (v[i], v[j]);
                    v[i] = g[0][0] * a + g[0][1] * b;
                    v[j] = g[1][0] * a + g[1][1] * b;
                }
            }
            Instruction::Zz { qubits, phi } => {
                let d = zz_phase_diag(qubits.0, qubits.1, *phi, n);
                for (x, p) in v.iter_mut().zip(d) {
                    *x *= p;
                }
            }
            Instruction::Swap { qubits } => {
                let sw = swap_unitary(n, qubits.0, qubits.1, 1.0);
                v = sw.matvec(&v);
            }
            Instruction::PerturbedSwap { qubits, phase_scale } => {
                let sw = swap_unitary(n, qubits.0, qubits.1, *phase_scale);
                v = sw.matvec(&v);
            }
            Instruction::Analog { duration_s } => {
                let d = &diags.as_ref().expect("resource").nominal;
                for (x, &e) in v.iter_mut().zip(d.iter()) {
                    *x *= C64::from_polar(1.0, -e * duration_s);
                }
            }
            Instruction::PerturbedAnalog { duration_s, coupling_scales } => {
                let d = diags.as_ref().expect("resource").scaled(coupling_scales);
                for (x, &e) in v.iter_mut().zip(d.iter()) {
                    *x *= C64::from_polar(1.0, -e * duration_s);
                }
            }
        }
    }
    Ok(v)
}

/// Banged-overlap simulation: every physical single-qubit pulse of duration
/// Δt evolves under exp(-iΔt(H̄ + Σ H_s)) with the resource Hamiltonian on;
/// pulses issued back-to-back on distinct qubits merge into one window.
/// Virtual Rz gates stay instantaneous and exact.
pub fn simulate_unitary_banged_overlap(circuit: &Circuit, sqg_time_s: f64) -> Result<CMat> {
    check_cap(circuit.num_qubits)?;
    circuit.validate()?;
    let n = circuit.num_qubits;
    let dim = 1usize << n;
    let diag = circuit
        .resource
        .as_ref()
        .map(hamiltonian_diag)
        .unwrap_or_else(|| vec![0.0; dim]);
    let mut u = CMat::identity(dim);
    let mut window: Vec<(usize, f64, f64)> = Vec::new(); // (qubit, theta, phi)
    let mut window_qubits = std::collections::BTreeSet::new();

    let flush = |u: &mut CMat, window: &mut Vec<(usize, f64, f64)>,
                 window_qubits: &mut std::collections::BTreeSet<usize>| {
        if window.is_empty() {
            return;
        }
        // generator: H̄ + Σ_a (θ_a / 2Δt)(cosφ X^a + sinφ Y^a), over Δt
        let mut gen = CMat::zeros(dim);
        for i in 0..dim {
            gen.set(i, i, C64::new(diag[i], 0.0));
        }
        for &(q, theta, phi) in window.iter() {
            let amp = theta / (2.0 * sqg_time_s);
            let mask = 1usize << (n - 1 - q);
            for i in 0..dim {
                if i & mask != 0 {
                    continue;
                }
                let j = i | mask;
                // amp * (cosφ X + sinφ Y): offdiag (i,j) = amp e^{-iφ}, (j,i) = amp e^{iφ}
                gen.set(i, j, gen.get(i, j) + C64::from_polar(amp, -phi));
                gen.set(j, i, gen.get(j, i) + C64::from_polar(amp, phi));
            }
        }
        gen.scale(C64::new(0.0, -sqg_time_s));
        let w = gen.expm();
        *u = w.matmul(u);
        window.clear();
        window_qubits.clear();
    };

    for ins in &circuit.instructions {
        match ins {
            Instruction::Sqg { qubit, gate } => {
                let (pulse, rz) = gate.lower();
                if let Some((theta, phi)) = pulse {
                    if window_qubits.contains(qubit) {
                        flush(&mut u, &mut window, &mut window_qubits);
                    }
                    window.push((*qubit, theta, phi));
                    window_qubits.insert(*qubit);
                    // the virtual part applies after the pulse window
                    if let Some(th) = rz {
                        flush(&mut u, &mut window, &mut window_qubits);
                        u.apply_sqg_left(n, *qubit, &rz_matrix(th));
                    }
                } else if let Some(th) = rz {
                    u.apply_sqg_left(n, *qubit, &rz_matrix(th));
                }
            }
            Instruction::Analog { duration_s } => {
                flush(&mut u, &mut window, &mut window_qubits);
                let phases: Vec<C64> = diag
                    .iter()
                    .map(|&e| C64::from_polar(1.0, -e * duration_s))
                    .collect();
                u.apply_diag_left(&phases);
            }
            _ => {
                return Err(DaqcError::InvalidInput(
                    "banged overlap simulation handles SQGs and analog blocks only".into(),
                ))
            }
        }
    }
    flush(&mut u, &mut window, &mut window_qubits);
    Ok(u)
}

/// Average fidelity over all input states: F = (n + |Tr(Ũ†U)|²) / (n(n+1)).
/// Symmetric and global-phase invariant.
pub fn average_unitary_fidelity(u: &CMat, v: &CMat) -> Result<f64> {
    if u.dim != v.dim {
        return Err(DaqcError::DimensionMismatch { left: u.dim, right: v.dim });
    }
    let n = u.dim as f64;
    let tr = u.overlap_trace(v);
    Ok((n + tr.norm_sqr()) / (n * (n + 1.0)))
}

/// State fidelity |⟨ψ|φ⟩|².
pub fn state_fidelity(psi: &[C64], reference: &[C64]) -> Result<f64> {
    if psi.len() != reference.len() {
        return Err(DaqcError::DimensionMismatch { left: psi.len(), right: reference.len() });
    }
    let ip: Complex64 = psi
        .iter()
        .zip(reference.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(ip.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Paradigm;
    use crate::hamiltonian::Connectivity;
    use std::f64::consts::PI;

    #[test]
    fn single_x_gate_is_pauli_x() {
        let mut c = Circuit::new(1, Paradigm::Dqc);
        c.push(Instruction::sqg(Gate::X, 0));
        let u = simulate_unitary(&c).unwrap();
        // X up to global phase: Rxy(π,0) = -iX
        let x = CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
        assert!((average_unitary_fidelity(&u, &x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lowering_table_is_exact_up_to_phase() {
        let h = CMat::from_rows(&[
            &[C64::new(0.5f64.sqrt(), 0.0), C64::new(0.5f64.sqrt(), 0.0)],
            &[C64::new(0.5f64.sqrt(), 0.0), C64::new(-(0.5f64.sqrt()), 0.0)],
        ]);
        let s = CMat::from_rows(&[&[ONE, ZERO], &[ZERO, C64::new(0.0, 1.0)]]);
        for (gate, want) in [(Gate::H, h), (Gate::S, s)] {
            let mut c = Circuit::new(1, Paradigm::Dqc);
            c.push(Instruction::sqg(gate, 0));
            let u = simulate_unitary(&c).unwrap();
            assert!(
                (average_unitary_fidelity(&u, &want).unwrap() - 1.0).abs() < 1e-12,
                "{gate:?}"
            );
        }
    }

    #[test]
    fn zz_of_opposite_phases_cancels() {
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::zz(0, 1, 0.37));
        c.push(Instruction::zz(0, 1, -0.37));
        let u = simulate_unitary(&c).unwrap();
        assert!(u.max_abs_diff(&CMat::identity(4)) < 1e-12);
    }

    #[test]
    fn analog_block_matches_dense_exponential() {
        // star N=3, t = π/(4ḡ): compare against expm of the full Hamiltonian
        let gbar = 1e7;
        let conn = Connectivity::star(3).unwrap();
        let res = IsingHamiltonian::homogeneous_resource(conn, gbar).unwrap();
        let mut c = Circuit::new(3, Paradigm::Sdaqc);
        c.resource = Some(res.clone());
        let t = PI / (4.0 * gbar);
        c.push(Instruction::Analog { duration_s: t });
        let u = simulate_unitary(&c).unwrap();
        let d = hamiltonian_diag(&res);
        let mut gen = CMat::zeros(8);
        for i in 0..8 {
            gen.set(i, i, C64::new(0.0, -d[i] * t));
        }
        let want = gen.expm();
        assert!(u.max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn swap_instruction_matches_swap_matrix() {
        let mut c = Circuit::new(2, Paradigm::Dqc);
        c.push(Instruction::Swap { qubits: (0, 1) });
        let u = simulate_unitary(&c).unwrap();
        let sw = CMat::from_rows(&[
            &[ONE, ZERO, ZERO, ZERO],
            &[ZERO, ZERO, ONE, ZERO],
            &[ZERO, ONE, ZERO, ZERO],
            &[ZERO, ZERO, ZERO, ONE],
        ]);
        assert!((average_unitary_fidelity(&u, &sw).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_worked_values() {
        let i2 = CMat::identity(2);
        let x = CMat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
        // orthogonal-generator case: (2 + 0) / 6
        assert!((average_unitary_fidelity(&i2, &x).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        // global phase invariance
        let mut xi = x.clone();
        xi.scale(C64::from_polar(1.0, 1.234));
        assert!((average_unitary_fidelity(&x, &xi).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_perturbation_is_second_order() {
        // F(U, e^{iεH}U) ≈ 1 - O(ε²)
        let dim = 4;
        let u = CMat::identity(dim);
        let mut errs = Vec::new();
        for &eps in &[1e-3, 2e-3] {
            let mut pert = CMat::identity(dim);
            for i in 0..dim {
                pert.set(i, i, C64::from_polar(1.0, eps * (i as f64 - 1.5)));
            }
            errs.push(1.0 - average_unitary_fidelity(&u, &pert).unwrap());
        }
        let ratio = errs[1] / errs[0];
        assert!((ratio - 4.0).abs() < 0.1, "quadratic scaling, got ratio {ratio}");
    }

    #[test]
    fn plus_state_overlap_with_ghz() {
        // |+...+⟩ vs GHZ_N: overlap² = 2^{1-N}
        for n in [2usize, 3, 4] {
            let dim = 1usize << n;
            let plus: Vec<C64> = vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
            let mut ghz = vec![ZERO; dim];
            ghz[0] = C64::new(0.5f64.sqrt(), 0.0);
            ghz[dim - 1] = C64::new(0.5f64.sqrt(), 0.0);
            let f = state_fidelity(&plus, &ghz).unwrap();
            assert!((f - 2f64.powi(1 - n as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_basis_states_have_zero_fidelity() {
        let a = vec![ONE, ZERO];
        let b = vec![ZERO, ONE];
        assert_eq!(state_fidelity(&a, &b).unwrap(), 0.0);
        assert_eq!(state_fidelity(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn banged_overlap_with_zero_resource_is_exact() {
        // Ĥ = 0: the overlap window reduces to the bare gate
        let conn = Connectivity::star(2).unwrap();
        let res = IsingHamiltonian::new(
            conn,
            vec![0.0],
            crate::hamiltonian::HamiltonianRole::Resource,
        )
        .unwrap();
        let mut c = Circuit::new(2, Paradigm::Bdaqc);
        c.resource = Some(res);
        c.push(Instruction::sqg(Gate::X, 0));
        let u = simulate_unitary_banged_overlap(&c, 5e-9).unwrap();
        let mut want = CMat::identity(4);
        want.apply_sqg_left(2, 0, &gate_matrix(Gate::X));
        assert!(u.max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn banged_window_error_scales_linearly_in_dt() {
        // central-block construction: ‖1 - e^{-iH̄Δt/2} e^{-iH_sΔt} e^{-iH̄Δt/2} e^{i(H̄+H_s)Δt}‖
        let gbar = 1e7;
        let err = |dt: f64| -> f64 {
            let conn = Connectivity::star(2).unwrap();
            let res = IsingHamiltonian::homogeneous_resource(conn, gbar).unwrap();
            let d = hamiltonian_diag(&res);
            let dim = 4;
            let half = |t: f64| {
                let mut m = CMat::zeros(dim);
                for i in 0..dim {
                    m.set(i, i, C64::from_polar(1.0, -d[i] * t));
                }
                m
            };
            let mut hs = CMat::zeros(dim);
            let amp = PI / (2.0 * dt);
            hs.set(0, 2, C64::new(amp, 0.0));
            hs.set(2, 0, C64::new(amp, 0.0));
            hs.set(1, 3, C64::new(amp, 0.0));
            hs.set(3, 1, C64::new(amp, 0.0));
            let mut gate = hs.clone();
            gate.scale(C64::new(0.0, -dt));
            let gate = gate.expm();
            let mut joint = hs.clone();
            for i in 0..dim {
                joint.set(i, i, joint.get(i, i) + C64::new(d[i], 0.0));
            }
            joint.scale(C64::new(0.0, dt));
            let joint = joint.expm();
            let prod = half(dt / 2.0)
                .matmul(&gate)
                .matmul(&half(dt / 2.0))
                .matmul(&joint);
            let mut dev = CMat::identity(dim);
            for (a, b) in dev.data.iter_mut().zip(prod.data.iter()) {
                *a -= *b;
            }
            dev.spectral_norm()
        };
        let e1 = err(1e-9);
        let e2 = err(2e-9);
        let slope = (e2 / e1).ln() / 2f64.ln();
        assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
    }
}
