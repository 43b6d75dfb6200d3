//! Analog-block runtime solves: M·t = G·t_f.
//!
//! The conjugation phase each coupling must accumulate is defined modulo π up
//! to a global sign (exp(-i(Φ+π)ZZ) = -exp(-iΦZZ), and global phase is not
//! tracked as significant). The compiler exploits this freedom through two
//! branch choices: a nonnegative branch for the ordered protocol, which needs
//! G ≥ 0, and a lower branch for banged compilation, which needs strictly
//! positive block times.

use nalgebra::{DMatrix, DVector};

use crate::error::{DaqcError, Result};
use crate::hamiltonian::IsingHamiltonian;
use crate::signs::SignMatrix;

use std::f64::consts::PI;

/// Relative tolerance below which a solved block time counts as zero.
pub const ZERO_TIME_TOL: f64 = 1e-12;

/// Shift a conjugation phase into [0, π) by whole-π steps (each step flips the
/// global sign only). Nonnegative inputs below π are returned unchanged.
pub fn phase_branch_nonneg(phi: f64) -> f64 {
    if (0.0..PI).contains(&phi) {
        return phi;
    }
    let r = phi.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Shift a conjugation phase into [-π, 0), mapping exact zeros to -π so every
/// coupling contributes strictly positive analog exposure.
pub fn phase_branch_lower(phi: f64) -> f64 {
    let r = phi.rem_euclid(PI);
    if r == 0.0 {
        -PI
    } else {
        r - PI
    }
}

/// Result of a runtime solve, with diagnostics.
#[derive(Debug, Clone)]
pub struct ScheduleSolve {
    /// Coupling ratios G_β = g_β/ḡ_β in solve order.
    pub g: Vec<f64>,
    /// Analog-block times, seconds, one per block.
    pub times_s: Vec<f64>,
    pub tf_s: f64,
    /// Some block times are negative: unphysical, but a valid unitary.
    pub negative_times: bool,
    /// Blocks with |t| below tolerance, eliminated from the emitted circuit.
    pub dropped_zero_blocks: usize,
}

impl ScheduleSolve {
    fn finalize(g: Vec<f64>, mut times: Vec<f64>, tf_s: f64) -> Self {
        let scale = times.iter().map(|t| t.abs()).fold(tf_s.abs(), f64::max);
        let mut dropped = 0;
        for t in &mut times {
            if t.abs() < ZERO_TIME_TOL * scale.max(1e-300) {
                *t = 0.0;
                dropped += 1;
            }
        }
        let negative = times.iter().any(|&t| t < 0.0);
        ScheduleSolve { g, times_s: times, tf_s, negative_times: negative, dropped_zero_blocks: dropped }
    }

    /// Largest relative residual of M·t − G·t_f.
    pub fn residual(&self, m: &SignMatrix) -> f64 {
        let t = DVector::from_vec(self.times_s.clone());
        let lhs = &m.entries * t;
        let mut worst = 0.0f64;
        for (i, &gi) in self.g.iter().enumerate() {
            let want = gi * self.tf_s;
            let scale = want.abs().max(self.tf_s.abs()).max(1e-300);
            worst = worst.max((lhs[i] - want).abs() / scale);
        }
        worst
    }
}

/// Coupling ratios for a target/resource pair, in the resource's tuple order.
pub fn coupling_ratios(target: &IsingHamiltonian, resource: &IsingHamiltonian) -> Result<Vec<f64>> {
    if target.connectivity() != resource.connectivity() {
        return Err(DaqcError::ConnectivityMismatch);
    }
    target
        .coefficients()
        .iter()
        .zip(resource.coefficients())
        .map(|(&g, &gbar)| {
            if gbar == 0.0 {
                Err(DaqcError::InvalidInput("resource coefficient is zero".into()))
            } else {
                Ok(g / gbar)
            }
        })
        .collect()
}

/// General runtime solve t = M⁻¹ G t_f.
///
/// Fails when M is numerically singular (smallest singular value below
/// 1e-9·c). Negative times are flagged, not rejected: the stepwise paradigm
/// tolerates them with a warning, the banged paradigm refuses them upstream.
pub fn solve_times(
    m: &SignMatrix,
    target: &IsingHamiltonian,
    resource: &IsingHamiltonian,
    tf_s: f64,
) -> Result<ScheduleSolve> {
    let g = coupling_ratios(target, resource)?;
    solve_times_for_g(m, &g, tf_s)
}

/// As [`solve_times`] but taking the G vector directly (solve order = row order).
pub fn solve_times_for_g(m: &SignMatrix, g: &[f64], tf_s: f64) -> Result<ScheduleSolve> {
    let c = m.size();
    if g.len() != c {
        return Err(DaqcError::DimensionMismatch { left: g.len(), right: c });
    }
    let sv = m.smallest_singular_value();
    if sv < 1e-9 * c as f64 {
        return Err(DaqcError::SingularSignMatrix { size: c, smallest_sv: sv });
    }
    let rhs = DVector::from_iterator(c, g.iter().map(|&x| x * tf_s));
    let lu = m.entries.clone().lu();
    let t = lu
        .solve(&rhs)
        .ok_or(DaqcError::SingularSignMatrix { size: c, smallest_sv: sv })?;
    Ok(ScheduleSolve::finalize(g.to_vec(), t.as_slice().to_vec(), tf_s))
}

/// Closed-form ordered solve for the triangular sign matrix:
///   t_α/t_f = (G_α − G_{α+1})/2  for α < c-1,
///   t_{c-1}/t_f = (G_0 + G_{c-1})/2.
/// Requires G sorted descending and nonnegative. Equal neighbours produce
/// zero-time blocks, which are counted as dropped.
pub fn solve_times_star(g_desc: &[f64], tf_s: f64) -> Result<ScheduleSolve> {
    let c = g_desc.len();
    if c == 0 {
        return Err(DaqcError::InvalidInput("empty G vector".into()));
    }
    for w in g_desc.windows(2) {
        if w[0] < w[1] {
            return Err(DaqcError::InvalidInput("G is not sorted descending".into()));
        }
    }
    if g_desc[c - 1] < 0.0 {
        return Err(DaqcError::InvalidInput("G has negative entries".into()));
    }
    let mut t = Vec::with_capacity(c);
    for alpha in 0..c - 1 {
        t.push((g_desc[alpha] - g_desc[alpha + 1]) / 2.0 * tf_s);
    }
    t.push((g_desc[0] + g_desc[c - 1]) / 2.0 * tf_s);
    Ok(ScheduleSolve::finalize(g_desc.to_vec(), t, tf_s))
}

/// G vector normalized for the ordered protocol: nonnegative entries sorted
/// descending, with the applied permutation and per-coupling phase-branch
/// shifts recorded.
#[derive(Debug, Clone)]
pub struct NormalizedG {
    /// Sorted descending, all ≥ 0.
    pub g_desc: Vec<f64>,
    /// `permutation[rank] = original coupling index`.
    pub permutation: Vec<usize>,
    /// Couplings whose phase was moved to the nonnegative branch
    /// (one global sign flip each).
    pub shifted: Vec<usize>,
}

/// Reorder and branch-shift G so the ordered protocol's conditions hold
/// (G_β ≥ 0 and G_β ≥ G_{β+1}). Negative couplings are made nonnegative by
/// moving the target phase φ_β = t_f·g_β to the adjacent branch, which
/// changes the realized unitary by a global sign only.
pub fn normalize_g(
    target: &IsingHamiltonian,
    resource: &IsingHamiltonian,
    tf_s: f64,
) -> Result<NormalizedG> {
    if tf_s <= 0.0 {
        return Err(DaqcError::InvalidInput("t_f must be positive".into()));
    }
    let ratios = coupling_ratios(target, resource)?;
    let gbars = resource.coefficients();
    let mut shifted = Vec::new();
    let mut g: Vec<f64> = Vec::with_capacity(ratios.len());
    for (beta, &r) in ratios.iter().enumerate() {
        if r >= 0.0 {
            g.push(r);
        } else {
            let phi = r * gbars[beta] * tf_s;
            let phi2 = phase_branch_nonneg(phi);
            shifted.push(beta);
            g.push(phi2 / (gbars[beta] * tf_s));
        }
    }
    let mut permutation: Vec<usize> = (0..g.len()).collect();
    permutation.sort_by(|&a, &b| g[b].partial_cmp(&g[a]).unwrap().then(a.cmp(&b)));
    let g_desc: Vec<f64> = permutation.iter().map(|&i| g[i]).collect();
    Ok(NormalizedG { g_desc, permutation, shifted })
}

/// Dense matrix helper for tests and diagnostics: M as nalgebra type.
pub fn as_dmatrix(m: &SignMatrix) -> &DMatrix<f64> {
    &m.entries
}
