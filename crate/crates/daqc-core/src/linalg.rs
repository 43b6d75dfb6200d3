//! Dense complex matrices sized for few-qubit unitary simulation.
//!
//! Everything here is deliberately simple: row-major `Vec<Complex64>` storage,
//! structured single-qubit/diagonal updates that avoid full matrix products
//! where possible, and a scaling-and-squaring exponential for the Hermitian
//! generators that appear in banged-evolution windows.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const ONE: C64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim);
            m.data[i * dim..(i + 1) * dim].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMat {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[j * self.dim + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    orow[j] += a * row[j];
                }
            }
        }
        out
    }

    /// tr(self† · rhs)
    pub fn overlap_trace(&self, rhs: &CMat) -> C64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// max_ij |self_ij - rhs_ij|
    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖U†U − I‖_max, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        self.dagger().matmul(self).max_abs_diff(&CMat::identity(self.dim))
    }

    /// Spectral norm via power iteration on A†A (deterministic start).
    pub fn spectral_norm(&self) -> f64 {
        let n = self.dim;
        let adj = self.dagger();
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 + (i as f64) * 0.618, 0.37 * (i as f64 + 1.0)))
            .collect();
        normalize(&mut v);
        let mut sigma = 0.0;
        for _ in 0..300 {
            let av = self.matvec(&v);
            let new = norm(&av).sqrt(); // ‖Av‖ with ‖v‖ = 1 → σ_max
            let mut w = adj.matvec(&av);
            normalize(&mut w);
            v = w;
            if (new - sigma).abs() <= 1e-13 * new.max(1e-300) {
                return new;
            }
            sigma = new;
        }
        sigma
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// In-place left multiplication by a single-qubit gate: U ← (g on qubit q) · U.
    /// Qubit 0 is the most significant bit of the basis index.
    pub fn apply_sqg_left(&mut self, num_qubits: usize, qubit: usize, g: &[[C64; 2]; 2]) {
        let n = self.dim;
        debug_assert_eq!(n, 1 << num_qubits);
        let mask = 1usize << (num_qubits - 1 - qubit);
        for r0 in 0..n {
            if r0 & mask != 0 {
                continue;
            }
            let r1 = r0 | mask;
            for j in 0..n {
                let a = self.data[r0 * n + j];
                let b = self.data[r1 * n + j];
                self.data[r0 * n + j] = g[0][0] * a + g[0][1] * b;
                self.data[r1 * n + j] = g[1][0] * a + g[1][1] * b;
            }
        }
    }

    /// In-place left multiplication by a diagonal operator: U ← diag(d) · U.
    pub fn apply_diag_left(&mut self, d: &[C64]) {
        let n = self.dim;
        assert_eq!(d.len(), n);
        for i in 0..n {
            let di = d[i];
            for x in &mut self.data[i * n..(i + 1) * n] {
                *x *= di;
            }
        }
    }

    pub fn scale(&mut self, c: C64) {
        for x in &mut self.data {
            *x *= c;
        }
    }

    pub fn add_assign(&mut self, rhs: &CMat) {
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += *b;
        }
    }

    /// 1-norm (max column sum), used to pick the exponential scaling.
    fn norm_one(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// exp(self) by scaling-and-squaring with a Taylor series.
    ///
    /// Accurate to ~1e-13 for the skew-Hermitian generators used here.
    pub fn expm(&self) -> CMat {
        let norm = self.norm_one();
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let mut a = self.clone();
        a.scale(C64::new(1.0 / f64::powi(2.0, s as i32), 0.0));
        // Taylor on the scaled matrix
        let mut result = CMat::identity(self.dim);
        let mut term = CMat::identity(self.dim);
        for k in 1..=24 {
            term = term.matmul(&a);
            term.scale(C64::new(1.0 / k as f64, 0.0));
            result.add_assign(&term);
            if term.data.iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-16 {
                break;
            }
        }
        for _ in 0..s {
            result = result.matmul(&result);
        }
        result
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>()
}

fn normalize(v: &mut [C64]) {
    let n = norm(v).sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Diagonal (as a ±1 vector) of Z^{q0} Z^{q1} ... over `num_qubits` qubits.
pub fn z_string_diag(qubits: &[usize], num_qubits: usize) -> Vec<f64> {
    let dim = 1usize << num_qubits;
    let mut d = vec![1.0; dim];
    for &q in qubits {
        let mask = 1usize << (num_qubits - 1 - q);
        for (i, x) in d.iter_mut().enumerate() {
            if i & mask != 0 {
                *x = -*x;
            }
        }
    }
    d
}

/// Embed a 2x2 operator on one qubit into the full 2^n dense matrix.
pub fn embed_sqg(num_qubits: usize, qubit: usize, g: &[[C64; 2]; 2]) -> CMat {
    let mut m = CMat::identity(1 << num_qubits);
    m.apply_sqg_left(num_qubits, qubit, g);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn expm_matches_scalar_rotation() {
        // exp(-i theta/2 Z) on one qubit
        let theta = 0.7;
        let mut g = CMat::zeros(2);
        g.set(0, 0, cx(0.0, -theta / 2.0));
        g.set(1, 1, cx(0.0, theta / 2.0));
        let u = g.expm();
        assert!((u.get(0, 0) - C64::from_polar(1.0, -theta / 2.0)).norm() < 1e-13);
        assert!((u.get(1, 1) - C64::from_polar(1.0, theta / 2.0)).norm() < 1e-13);
        assert!(u.get(0, 1).norm() < 1e-14);
    }

    #[test]
    fn expm_of_x_generator() {
        // exp(-i pi/2 X) = -i X
        let mut g = CMat::zeros(2);
        g.set(0, 1, cx(0.0, -std::f64::consts::FRAC_PI_2));
        g.set(1, 0, cx(0.0, -std::f64::consts::FRAC_PI_2));
        let u = g.expm();
        assert!((u.get(0, 1) - cx(0.0, -1.0)).norm() < 1e-12);
        assert!((u.get(1, 0) - cx(0.0, -1.0)).norm() < 1e-12);
        assert!(u.get(0, 0).norm() < 1e-12);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let mut m = CMat::zeros(3);
        m.set(0, 0, cx(1.0, 0.0));
        m.set(1, 1, cx(-4.0, 0.0));
        m.set(2, 2, cx(2.0, 0.0));
        assert!((m.spectral_norm() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn z_string_signs() {
        let d = z_string_diag(&[0, 1], 2);
        assert_eq!(d, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn sqg_update_equals_kron() {
        let h = [[cx(0.5f64.sqrt(), 0.0); 2], [cx(0.5f64.sqrt(), 0.0), cx(-(0.5f64.sqrt()), 0.0)]];
        let mut u = CMat::identity(4);
        u.apply_sqg_left(2, 1, &h);
        // H on qubit 1 (LSB): expect I ⊗ H
        assert!((u.get(0, 0).re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((u.get(0, 1).re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((u.get(2, 3).re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((u.get(3, 3).re + 0.5f64.sqrt()).abs() < 1e-12);
        assert!(u.get(0, 2).norm() < 1e-12);
    }
}
