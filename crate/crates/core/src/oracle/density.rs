use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::state::outcome_index;
use crate::circuit::{Gate, GateKind, Mat2, Mat4, NoiseParams};
use crate::error::{Error, Result};

/// Density matrix on `n` qubits, row-major, same qubit ordering as [`super::DenseState`].
#[derive(Clone, Debug)]
pub struct DenseDensity {
    n: usize,
    rho: Vec<C64>,
}

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_SLACK: f64 = 1e-8;

impl DenseDensity {
    /// `|0…0⟩⟨0…0|`.
    pub fn zero(n: usize) -> Self {
        let dim = 1usize << n;
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        rho[0] = C64::new(1.0, 0.0);
        DenseDensity { n, rho }
    }

    pub fn from_matrix(n: usize, rho: Vec<C64>) -> Result<Self> {
        let dim = 1usize << n;
        if rho.len() != dim * dim {
            return Err(Error::SizeMismatch(format!("{} entries for {} qubits", rho.len(), n)));
        }
        let d = DenseDensity { n, rho };
        d.validate()?;
        Ok(d)
    }

    pub fn pure(amps: &[C64]) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::SizeMismatch("amplitude count must be a power of two".into()));
        }
        let n = dim.trailing_zeros() as usize;
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                rho[i * dim + j] = amps[i] * amps[j].conj();
            }
        }
        DenseDensity::from_matrix(n, rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &[C64] {
        &self.rho
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.rho[i * self.dim() + j]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            // symmetrise so the eigen solver sees an exactly Hermitian input
            (self.entry(i, j) + self.entry(j, i).conj()) * 0.5
        });
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Hermitian, unit trace, and positive semidefinite up to the eigenvalue slack.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidParameter(format!("density matrix not Hermitian ({herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!("density matrix trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_SLACK {
            return Err(Error::InvalidParameter(format!("density matrix eigenvalue {min:.3e} < 0")));
        }
        Ok(())
    }

    pub fn apply_1q(&mut self, u: &Mat2, wire: usize) {
        let dim = self.dim();
        let bit = 1usize << wire;
        // rows: U ρ
        for j in 0..dim {
            for i0 in (0..dim).filter(|i| i & bit == 0) {
                let i1 = i0 | bit;
                let (a, b) = (self.rho[i0 * dim + j], self.rho[i1 * dim + j]);
                self.rho[i0 * dim + j] = u[0][0] * a + u[0][1] * b;
                self.rho[i1 * dim + j] = u[1][0] * a + u[1][1] * b;
            }
        }
        // columns: (U ρ) U†
        for i in 0..dim {
            let row = &mut self.rho[i * dim..(i + 1) * dim];
            for j0 in (0..dim).filter(|j| j & bit == 0) {
                let j1 = j0 | bit;
                let (a, b) = (row[j0], row[j1]);
                row[j0] = a * u[0][0].conj() + b * u[0][1].conj();
                row[j1] = a * u[1][0].conj() + b * u[1][1].conj();
            }
        }
    }

    pub fn apply_2q(&mut self, u: &Mat4, w0: usize, w1: usize) {
        let dim = self.dim();
        let (b0, b1) = (1usize << w0, 1usize << w1);
        let bases: Vec<[usize; 4]> = (0..dim)
            .filter(|i| i & (b0 | b1) == 0)
            .map(|i| [i, i | b1, i | b0, i | b0 | b1])
            .collect();
        for j in 0..dim {
            for idx in &bases {
                let v = idx.map(|i| self.rho[i * dim + j]);
                for (row, &i) in idx.iter().enumerate() {
                    self.rho[i * dim + j] = (0..4).map(|k| u[row][k] * v[k]).sum();
                }
            }
        }
        for i in 0..dim {
            let row = &mut self.rho[i * dim..(i + 1) * dim];
            for idx in &bases {
                let v = idx.map(|j| row[j]);
                for (col, &j) in idx.iter().enumerate() {
                    row[j] = (0..4).map(|k| v[k] * u[col][k].conj()).sum();
                }
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

    /// `(1 − e) ρ + e σ ρ σ` for a single-qubit Pauli `σ`.
    fn pauli_flip(&mut self, sigma: &GateKind, wire: usize, e: f64) {
        if e == 0.0 {
            return;
        }
        let mut flipped = self.clone();
        flipped.apply_1q(&sigma.matrix1().expect("Pauli"), wire);
        for (a, b) in self.rho.iter_mut().zip(&flipped.rho) {
            *a = *a * (1.0 - e) + *b * e;
        }
    }

    /// Applies the twirl Pauli `X^x Z^z` on `wire` (conjugation, so the order is irrelevant).
    pub fn apply_pauli(&mut self, wire: usize, x: bool, z: bool) {
        if z {
            self.apply_1q(&GateKind::Z.matrix1().unwrap(), wire);
        }
        if x {
            self.apply_1q(&GateKind::X.matrix1().unwrap(), wire);
        }
    }

    /// Computational-basis probabilities marginalised onto `wires`.
    pub fn marginal(&self, wires: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << wires.len()];
        for i in 0..self.dim() {
            out[outcome_index(i, wires)] += self.entry(i, i).re;
        }
        out
    }

    pub(crate) fn apply_noise_in_place(&mut self, wire: usize, np: &NoiseParams) {
        self.pauli_flip(&GateKind::Z, wire, np.e1);
        self.pauli_flip(&GateKind::X, wire, np.e2);
        self.pauli_flip(&GateKind::Y, wire, np.e3);
    }
}

/// `E3 ∘ E2 ∘ E1` on one wire: Z flip with `e1`, then X flip with `e2`, then Y flip with `e3`.
pub fn apply_noise_channel(rho: &DenseDensity, wire: usize, np: &NoiseParams) -> Result<DenseDensity> {
    if wire >= rho.n {
        return Err(Error::OutOfRange { index: wire, len: rho.n });
    }
    np.validate()?;
    let mut out = rho.clone();
    out.apply_noise_in_place(wire, np);
    Ok(out)
}
