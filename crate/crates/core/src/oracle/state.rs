use num_complex::Complex64 as C64;

use crate::circuit::{Gate, Mat2, Mat4};
use crate::error::{Error, Result};

/// Statevector on `n` qubits; qubit `j` is bit `j` of the amplitude index.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<C64>,
}

impl DenseState {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        DenseState { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::SizeMismatch(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                n
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("state norm² {norm} differs from 1")));
        }
        Ok(DenseState { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_1q(&mut self, u: &Mat2, wire: usize) {
        let bit = 1usize << wire;
        for i0 in 0..self.amps.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let (a, b) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = u[0][0] * a + u[0][1] * b;
            self.amps[i1] = u[1][0] * a + u[1][1] * b;
        }
    }

    /// `u` in basis `|w0 w1⟩`, `w0` most significant.
    pub fn apply_2q(&mut self, u: &Mat4, w0: usize, w1: usize) {
        let (b0, b1) = (1usize << w0, 1usize << w1);
        for base in 0..self.amps.len() {
            if base & (b0 | b1) != 0 {
                continue;
            }
            let idx = [base, base | b1, base | b0, base | b0 | b1];
            let v = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                self.amps[i] = (0..4).map(|k| u[row][k] * v[k]).sum();
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        if let Some(u) = g.kind.matrix1() {
            self.apply_1q(&u, g.targets[0]);
        } else if let Some(u) = g.kind.matrix2() {
            self.apply_2q(&u, g.targets[0], g.targets[1]);
        }
    }

    /// Applies `X^x Z^z` on one wire.
    pub fn apply_pauli(&mut self, wire: usize, x: bool, z: bool) {
        let bit = 1usize << wire;
        if z {
            for (i, a) in self.amps.iter_mut().enumerate() {
                if i & bit != 0 {
                    *a = -*a;
                }
            }
        }
        if x {
            for i0 in 0..self.amps.len() {
                if i0 & bit == 0 {
                    self.amps.swap(i0, i0 | bit);
                }
            }
        }
    }

    /// Computational-basis probabilities marginalised onto `wires`
    /// (outcome bit `k` is the value on `wires[k]`).
    pub fn marginal(&self, wires: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << wires.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[outcome_index(i, wires)] += a.norm_sqr();
        }
        out
    }
}

#[inline]
pub(crate) fn outcome_index(basis: usize, wires: &[usize]) -> usize {
    wires
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &w)| acc | (((basis >> w) & 1) << k))
}
