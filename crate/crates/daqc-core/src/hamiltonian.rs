//! Connectivities, ZZ-Ising Hamiltonians and tuple/index vectorization.
//!
//! A connectivity 𝒞 is the ordered collection of coupled qubit tuples of a
//! device: c two-qubit pairs, optionally followed by higher b-body tuples.
//! Hamiltonians attach one real coupling coefficient (rad/s) to every tuple.
//! All types are immutable after construction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{DaqcError, Result};

/// Coupled qubit tuples of a device. Pairs are `(j, k)` with `k > j`;
/// higher tuples are strictly increasing index lists of length ≥ 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    num_qubits: usize,
    pairs: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    higher_tuples: Vec<Vec<usize>>,
}

impl Connectivity {
    pub fn new(num_qubits: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::with_higher(num_qubits, pairs, Vec::new())
    }

    pub fn with_higher(
        num_qubits: usize,
        pairs: Vec<(usize, usize)>,
        higher_tuples: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if num_qubits < 2 {
            return Err(DaqcError::InvalidInput("need at least 2 qubits".into()));
        }
        if pairs.is_empty() {
            return Err(DaqcError::InvalidInput("pair list is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(j, k) in &pairs {
            if k <= j || k >= num_qubits {
                return Err(DaqcError::InvalidInput(format!(
                    "pair ({j},{k}) is not strictly increasing within [0,{num_qubits})"
                )));
            }
            if !seen.insert(vec![j, k]) {
                return Err(DaqcError::InvalidInput(format!("duplicate pair ({j},{k})")));
            }
        }
        for t in &higher_tuples {
            if t.len() < 3 {
                return Err(DaqcError::InvalidInput("higher tuple shorter than 3".into()));
            }
            if !t.windows(2).all(|w| w[0] < w[1]) || *t.last().unwrap() >= num_qubits {
                return Err(DaqcError::InvalidInput(format!(
                    "tuple {t:?} is not strictly increasing within [0,{num_qubits})"
                )));
            }
            if !seen.insert(t.clone()) {
                return Err(DaqcError::InvalidInput(format!("duplicate tuple {t:?}")));
            }
        }
        Ok(Connectivity { num_qubits, pairs, higher_tuples })
    }

    /// All-to-all: every pair coupled, c = N(N-1)/2.
    pub fn all_to_all(num_qubits: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        for j in 0..num_qubits {
            for k in (j + 1)..num_qubits {
                pairs.push((j, k));
            }
        }
        Self::new(num_qubits, pairs)
    }

    /// Star: central qubit 0 coupled to each external, c = N-1.
    pub fn star(num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, (1..num_qubits).map(|k| (0, k)).collect())
    }

    /// Open chain with nearest-neighbour couplings, c = N-1.
    pub fn chain(num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, (0..num_qubits - 1).map(|j| (j, j + 1)).collect())
    }

    /// Build a named layout: "ata", "star" or "chain".
    pub fn generate(kind: &str, num_qubits: usize) -> Result<Self> {
        match kind {
            "ata" => Self::all_to_all(num_qubits),
            "star" => Self::star(num_qubits),
            "chain" => Self::chain(num_qubits),
            other => Err(DaqcError::InvalidInput(format!("unknown connectivity '{other}'"))),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn higher_tuples(&self) -> &[Vec<usize>] {
        &self.higher_tuples
    }

    /// Total tuple count c = Σ_b c_b.
    pub fn len(&self) -> usize {
        self.pairs.len() + self.higher_tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // pairs are non-empty by construction
    }

    /// All tuples in canonical order: pairs first, then higher tuples
    /// sorted by (length, lexicographic).
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.pairs.iter().map(|&(j, k)| vec![j, k]).collect();
        let mut hi = self.higher_tuples.clone();
        hi.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out.extend(hi);
        out
    }

    /// True when every pair is (0, k): the ordered star protocol applies directly.
    pub fn is_star(&self) -> bool {
        self.higher_tuples.is_empty() && self.pairs.iter().all(|&(j, _)| j == 0)
    }

    /// Number of couplings touching `qubit`.
    pub fn degree(&self, qubit: usize) -> usize {
        self.pairs.iter().filter(|&&(j, k)| j == qubit || k == qubit).count()
            + self.higher_tuples.iter().filter(|t| t.contains(&qubit)).count()
    }
}

/// Whether a Hamiltonian plays the fixed device role or the compile target role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianRole {
    Resource,
    Target,
}

/// ZZ-Ising Hamiltonian: one coefficient (rad/s) per connectivity tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingHamiltonian {
    connectivity: Connectivity,
    /// One coefficient per tuple, in the canonical tuple order.
    coefficients: Vec<f64>,
    role: HamiltonianRole,
}

impl IsingHamiltonian {
    pub fn new(
        connectivity: Connectivity,
        coefficients: Vec<f64>,
        role: HamiltonianRole,
    ) -> Result<Self> {
        if coefficients.len() != connectivity.len() {
            return Err(DaqcError::InvalidInput(format!(
                "{} coefficients for {} tuples",
                coefficients.len(),
                connectivity.len()
            )));
        }
        if !coefficients.iter().all(|g| g.is_finite()) {
            return Err(DaqcError::InvalidInput("non-finite coefficient".into()));
        }
        Ok(IsingHamiltonian { connectivity, coefficients, role })
    }

    /// Homogeneous resource Hamiltonian: the same ḡ on every tuple.
    pub fn homogeneous_resource(connectivity: Connectivity, gbar: f64) -> Result<Self> {
        let n = connectivity.len();
        Self::new(connectivity, vec![gbar; n], HamiltonianRole::Resource)
    }

    pub fn connectivity(&self) -> &Connectivity {
        &self.connectivity
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn role(&self) -> HamiltonianRole {
        self.role
    }

    pub fn coefficient_of(&self, tuple: &[usize]) -> Option<f64> {
        self.connectivity
            .tuples()
            .iter()
            .position(|t| t == tuple)
            .map(|i| self.coefficients[i])
    }
}

/// Bijection between connectivity tuples and flat indices (0-based).
///
/// Ordering is by tuple length, then lexicographic; for an all-to-all
/// device this coincides with the closed-form pair vectorization up to the
/// 1-based offset of that formula.
#[derive(Debug, Clone)]
pub struct TupleIndexMap {
    forward: HashMap<Vec<usize>, usize>,
    backward: Vec<Vec<usize>>,
}

impl TupleIndexMap {
    pub fn len(&self) -> usize {
        self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.forward.get(tuple).copied()
    }

    pub fn tuple_of(&self, index: usize) -> &[usize] {
        &self.backward[index]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.backward
    }
}

/// Deterministic tuple-to-index bijection for any connectivity.
pub fn build_index_map(connectivity: &Connectivity) -> TupleIndexMap {
    let backward = connectivity.tuples();
    let forward = backward
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    TupleIndexMap { forward, backward }
}

/// Closed-form all-to-all pair vectorization, 1-based result:
/// α = N(m-1) - m(m+1)/2 + n for 1-based (m, n).
///
/// Takes 0-based qubit indices; the 1-based α convention is kept so the
/// inverse formula below applies unchanged. `build_index_map` gives the
/// 0-based equivalent (α - 1).
pub fn vectorize_ata(pair: (usize, usize), num_qubits: usize) -> Result<usize> {
    let (m, n) = pair;
    if m >= n || n >= num_qubits {
        return Err(DaqcError::InvalidInput(format!(
            "pair ({m},{n}) invalid for N={num_qubits}"
        )));
    }
    let (m1, n1) = (m as i64 + 1, n as i64 + 1);
    let alpha = num_qubits as i64 * (m1 - 1) - m1 * (m1 + 1) / 2 + n1;
    Ok(alpha as usize)
}

/// Inverse of [`vectorize_ata`] via the unit-step sum over block boundaries.
pub fn devectorize_ata(alpha: usize, num_qubits: usize) -> Result<(usize, usize)> {
    let c = num_qubits * (num_qubits - 1) / 2;
    if alpha == 0 || alpha > c {
        return Err(DaqcError::InvalidInput(format!(
            "alpha={alpha} out of range 1..={c} for N={num_qubits}"
        )));
    }
    let step = |x: f64| if x >= 1.0 { 1 } else { 0 };
    let mut first = 1i64;
    for k in 1..num_qubits.saturating_sub(1) {
        let threshold = k * num_qubits - k * (k + 1) / 2 + 1;
        first += step(alpha as f64 / threshold as f64);
    }
    let second = alpha as i64 + first * (first + 1) / 2 - num_qubits as i64 * (first - 1);
    Ok(((first - 1) as usize, (second - 1) as usize))
}

/// Convert a coupling value given in MHz to the internal rad/s unit.
///
/// Coefficients are angular frequencies in natural units; the default
/// ḡ = 10 MHz maps to 1e7 rad/s.
pub fn mhz_to_rad_per_s(mhz: f64) -> f64 {
    mhz * 1.0e6
}

/// JSON document for a device or target definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianDoc {
    pub num_qubits: usize,
    pub pairs: Vec<[usize; 2]>,
    #[serde(default)]
    pub higher_tuples: Vec<Vec<usize>>,
    /// One per tuple (pairs first, then higher tuples), in MHz.
    #[serde(alias = "coefficients")]
    pub coefficients_mhz: Vec<f64>,
    #[serde(default = "default_role")]
    pub role: HamiltonianRole,
}

fn default_role() -> HamiltonianRole {
    HamiltonianRole::Target
}

impl HamiltonianDoc {
    pub fn into_hamiltonian(self) -> Result<IsingHamiltonian> {
        let conn = Connectivity::with_higher(
            self.num_qubits,
            self.pairs.iter().map(|p| (p[0], p[1])).collect(),
            self.higher_tuples,
        )?;
        let coeffs = self.coefficients_mhz.iter().map(|&g| mhz_to_rad_per_s(g)).collect();
        IsingHamiltonian::new(conn, coeffs, self.role)
    }
}
