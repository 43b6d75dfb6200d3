//! Sign matrices relating analog-block times to effective target couplings.
//!
//! Conjugating an analog block with X gates on a qubit set S flips the sign of
//! every coupling tuple sharing an odd number of qubits with S, so the block
//! realizes Σ (-1)^{|tuple ∩ S|} ḡ_tuple Z...Z. Collecting one block per
//! connectivity tuple gives a square ±1 matrix M with M·t = G·t_f.

use nalgebra::DMatrix;

use crate::error::{DaqcError, Result};
use crate::hamiltonian::{build_index_map, Connectivity, TupleIndexMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMatrixKind {
    /// One block per pair, sandwiched by X^m X^n (any 2-body connectivity).
    GeneralXx,
    /// Ordered protocol: block α flips couplings α+1..c, giving the
    /// triangular matrix with +1 on and above the diagonal.
    StarOptimized,
    /// Block matrix over mixed tuple sizes (up to M-body terms).
    JointMBody,
}

/// A c × c ±1 matrix; rows index couplings, columns index analog blocks.
#[derive(Debug, Clone)]
pub struct SignMatrix {
    pub kind: SignMatrixKind,
    pub entries: DMatrix<f64>,
    pub index_map: TupleIndexMap,
    /// For each block (column), the qubit set receiving X gates.
    pub placements: Vec<Vec<usize>>,
}

impl SignMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Smallest singular value; the singularity diagnostic compares it
    /// against 1e-9 · c (integer entries make true singularity exact, but the
    /// solve runs in floating point).
    pub fn smallest_singular_value(&self) -> f64 {
        let svd = self.entries.clone().svd(false, false);
        svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn is_singular(&self) -> bool {
        self.smallest_singular_value() < 1e-9 * self.size() as f64
    }
}

fn intersection_parity_sign(tuple: &[usize], placement: &[usize]) -> f64 {
    let shared = tuple.iter().filter(|q| placement.contains(q)).count();
    if shared % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign matrix for the general two-body protocol: block β places X gates on
/// both qubits of pair β, so M_{αβ} = (-1)^{δ_mj+δ_mk+δ_nj+δ_nk}.
pub fn build_sign_matrix_general(connectivity: &Connectivity) -> Result<SignMatrix> {
    if !connectivity.higher_tuples().is_empty() {
        return Err(DaqcError::InvalidInput(
            "general XX protocol handles 2-body connectivities; use the joint matrix".into(),
        ));
    }
    let map = build_index_map(connectivity);
    let c = map.len();
    let placements: Vec<Vec<usize>> = map.tuples().to_vec();
    let mut m = DMatrix::zeros(c, c);
    for row in 0..c {
        for col in 0..c {
            m[(row, col)] = intersection_parity_sign(map.tuple_of(row), &placements[col]);
        }
    }
    Ok(SignMatrix { kind: SignMatrixKind::GeneralXx, entries: m, index_map: map, placements })
}

/// Joint matrix for resource Hamiltonians with up to M-body terms: the first
/// c_2 blocks carry X^m X^n sandwiches, the next c_3 blocks X^m X^n X^p, and
/// so on; entries are (-1)^{|tuple ∩ placement|}.
pub fn build_joint_matrix_mbody(connectivity: &Connectivity) -> SignMatrix {
    let map = build_index_map(connectivity);
    let c = map.len();
    let placements: Vec<Vec<usize>> = map.tuples().to_vec();
    let mut m = DMatrix::zeros(c, c);
    for row in 0..c {
        for col in 0..c {
            m[(row, col)] = intersection_parity_sign(map.tuple_of(row), &placements[col]);
        }
    }
    SignMatrix { kind: SignMatrixKind::JointMBody, entries: m, index_map: map, placements }
}

/// The triangular matrix of the ordered protocol: +1 on and above the
/// diagonal, -1 below.
pub fn triangular_entries(c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(c, c, |row, col| if row > col { -1.0 } else { 1.0 })
}

/// Sign matrix + X placements for the ordered star protocol.
///
/// Block α flips couplings α+1..c-1 (0-based): on a star that means X gates on
/// the external qubits of those couplings, so the first block flips all but
/// one connection and each later block one fewer.
pub fn build_sign_matrix_star(num_qubits: usize) -> Result<SignMatrix> {
    if num_qubits < 2 {
        return Err(DaqcError::InvalidInput("star needs at least 2 qubits".into()));
    }
    let conn = Connectivity::star(num_qubits)?;
    let map = build_index_map(&conn);
    let c = map.len();
    let placements: Vec<Vec<usize>> =
        (0..c).map(|alpha| ((alpha + 2)..=c).collect()).collect();
    Ok(SignMatrix {
        kind: SignMatrixKind::StarOptimized,
        entries: triangular_entries(c),
        index_map: map,
        placements,
    })
}

/// X placements realizing the triangular sign pattern on an arbitrary
/// connectivity, for couplings taken in the given order.
///
/// Solves, over GF(2), for a qubit set per block whose intersection parity
/// with coupling β is 1 exactly when β > α. Star and chain layouts admit
/// solutions; a square lattice does not (flipping one connection in isolation
/// is impossible there) and yields an error.
pub fn triangular_placements(
    connectivity: &Connectivity,
    coupling_order: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let tuples = connectivity.tuples();
    let c = tuples.len();
    let n = connectivity.num_qubits();
    let mut placements = Vec::with_capacity(c);
    for alpha in 0..c {
        // parity target: couplings ordered after alpha flip
        let target: Vec<u8> = (0..c).map(|beta| u8::from(beta > alpha)).collect();
        // rows: one parity equation per coupling; unknowns: qubit indicators
        let mut rows: Vec<(Vec<u8>, u8)> = (0..c)
            .map(|beta| {
                let t = &tuples[coupling_order[beta]];
                let mut coeff = vec![0u8; n];
                for &q in t {
                    coeff[q] = 1;
                }
                (coeff, target[beta])
            })
            .collect();
        let solution = solve_gf2(&mut rows, n).ok_or_else(|| {
            DaqcError::UnsupportedProtocol(format!(
                "no X placement realizes the ordered sign pattern for block {alpha} on this connectivity"
            ))
        })?;
        placements.push((0..n).filter(|&q| solution[q] == 1).collect());
    }
    Ok(placements)
}

/// Gaussian elimination over GF(2). Returns one solution if consistent.
fn solve_gf2(rows: &mut [(Vec<u8>, u8)], n: usize) -> Option<Vec<u8>> {
    let m = rows.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        if let Some(p) = (r..m).find(|&i| rows[i].0[col] == 1) {
            rows.swap(r, p);
            for i in 0..m {
                if i != r && rows[i].0[col] == 1 {
                    let (head, tail) = if i < r {
                        let (a, b) = rows.split_at_mut(r);
                        (&mut a[i], &b[0])
                    } else {
                        let (a, b) = rows.split_at_mut(i);
                        (&mut b[0], &a[r])
                    };
                    for c2 in 0..n {
                        head.0[c2] ^= tail.0[c2];
                    }
                    head.1 ^= tail.1;
                }
            }
            pivot_cols.push(col);
            r += 1;
        }
    }
    // consistency: zero rows must have zero rhs
    for row in rows[r..].iter() {
        if row.1 == 1 {
            return None;
        }
    }
    let mut x = vec![0u8; n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = rows[i].1;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ata3_matrix_from_delta_formula() {
        let conn = Connectivity::all_to_all(3).unwrap();
        let m = build_sign_matrix_general(&conn).unwrap();
        let expect = [[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entries[(i, j)], expect[i][j]);
            }
        }
    }

    #[test]
    fn diagonal_is_plus_one_everywhere() {
        for conn in [
            Connectivity::all_to_all(5).unwrap(),
            Connectivity::star(6).unwrap(),
            Connectivity::chain(5).unwrap(),
        ] {
            let m = build_sign_matrix_general(&conn).unwrap();
            for i in 0..m.size() {
                assert_eq!(m.entries[(i, i)], 1.0);
            }
        }
    }

    #[test]
    fn ata4_is_singular_others_not() {
        for n in [3usize, 4, 5, 6, 7, 8] {
            let conn = Connectivity::all_to_all(n).unwrap();
            let m = build_sign_matrix_general(&conn).unwrap();
            assert_eq!(m.is_singular(), n == 4, "N={n}");
        }
    }

    #[test]
    fn star_matrix_shape() {
        let m = build_sign_matrix_star(3).unwrap();
        assert_eq!(m.entries[(0, 0)], 1.0);
        assert_eq!(m.entries[(0, 1)], 1.0);
        assert_eq!(m.entries[(1, 0)], -1.0);
        assert_eq!(m.entries[(1, 1)], 1.0);
    }

    #[test]
    fn star_placements_realize_the_triangular_pattern() {
        // evaluate the delta formula on the emitted placements
        for n in [5usize, 6] {
            let m = build_sign_matrix_star(n).unwrap();
            let tuples = m.index_map.tuples();
            for (col, placement) in m.placements.iter().enumerate() {
                for (row, t) in tuples.iter().enumerate() {
                    let sign = intersection_parity_sign(t, placement);
                    assert_eq!(sign, m.entries[(row, col)], "N={n} row={row} col={col}");
                }
            }
        }
    }

    #[test]
    fn star_block_one_flips_all_but_one() {
        let m = build_sign_matrix_star(5).unwrap();
        assert_eq!(m.placements[0], vec![2, 3, 4]);
        assert_eq!(m.placements[3], Vec::<usize>::new());
    }

    #[test]
    fn gf2_placements_work_on_chain() {
        let conn = Connectivity::chain(5).unwrap();
        let order: Vec<usize> = (0..conn.len()).collect();
        let pl = triangular_placements(&conn, &order).unwrap();
        let tuples = conn.tuples();
        let c = tuples.len();
        for (col, placement) in pl.iter().enumerate() {
            for (row, t) in tuples.iter().enumerate() {
                let want = if row > col { -1.0 } else { 1.0 };
                assert_eq!(intersection_parity_sign(t, placement), want);
            }
        }
        assert_eq!(pl.len(), c);
    }

    #[test]
    fn gf2_placements_fail_on_a_plaquette() {
        // 4-cycle: flipping one edge in isolation is impossible
        let conn = Connectivity::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let order: Vec<usize> = (0..4).collect();
        assert!(triangular_placements(&conn, &order).is_err());
    }

    #[test]
    fn joint_matrix_reduces_to_general_for_two_body() {
        let conn = Connectivity::all_to_all(4).unwrap();
        let a = build_sign_matrix_general(&conn).unwrap();
        let b = build_joint_matrix_mbody(&conn);
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn joint_matrix_mixed_body_entry() {
        // coupling (0,1) under X^0 X^1 X^2 keeps its sign: (-1)^2 = +1
        let conn = Connectivity::with_higher(3, vec![(0, 1), (0, 2), (1, 2)], vec![vec![0, 1, 2]])
            .unwrap();
        let m = build_joint_matrix_mbody(&conn);
        assert_eq!(m.size(), 4);
        let row = m.index_map.index_of(&[0, 1]).unwrap();
        let col = m.index_map.index_of(&[0, 1, 2]).unwrap();
        assert_eq!(m.entries[(row, col)], 1.0);
        // triple under X^0 X^1: shares two qubits -> +1; under X^0: -1
        let trow = m.index_map.index_of(&[0, 1, 2]).unwrap();
        let pcol = m.index_map.index_of(&[0, 1]).unwrap();
        assert_eq!(m.entries[(trow, pcol)], 1.0);
    }
}
