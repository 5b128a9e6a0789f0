use num_complex::Complex64 as C64;

use super::conjugate_in_place;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Stabilizer tableau: `n` destabilizer and `n` stabilizer generators,
/// each a Hermitian Pauli string with sign `±1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tableau {
    n: usize,
    destabilizers: Vec<PauliString>,
    stabilizers: Vec<PauliString>,
}

impl Tableau {
    /// Tableau of `|0…0⟩`: destabilizers `X_j`, stabilizers `Z_j`.
    pub fn new(n: usize) -> Self {
        let row = |wire: usize, x: bool| PauliString::single(n, wire, x, !x).expect("wire in range");
        Tableau {
            n,
            destabilizers: (0..n).map(|j| row(j, true)).collect(),
            stabilizers: (0..n).map(|j| row(j, false)).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    /// Conjugates every generator by `g`.
    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        if !g.is_clifford() {
            return Err(Error::NonClifford(g.kind.name().into()));
        }
        for row in self.destabilizers.iter_mut().chain(self.stabilizers.iter_mut()) {
            conjugate_in_place(row, g)?;
        }
        debug_assert!(self.check_invariants().is_ok());
        Ok(())
    }

    /// Stabilizers commute, `{D_i, S_j}` anticommute iff `i = j`, and all signs are real.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if i != j && self.stabilizers[i].anticommutes(&self.stabilizers[j]) {
                    return Err(Error::Precondition(format!("stabilizers {i} and {j} anticommute")));
                }
                if self.destabilizers[i].anticommutes(&self.stabilizers[j]) != (i == j) {
                    return Err(Error::Precondition(format!("destabilizer {i} / stabilizer {j} pairing broken")));
                }
            }
        }
        for row in self.destabilizers.iter().chain(&self.stabilizers) {
            if !is_hermitian(row) {
                return Err(Error::Precondition(format!("generator {row} has an imaginary sign")));
            }
        }
        Ok(())
    }

    /// `⟨ψ| p |ψ⟩` for the stabilizer state `|ψ⟩`, which lies in `{0, ±1, ±i}`.
    pub fn expectation(&self, p: &PauliString) -> Result<C64> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch(format!("{}-qubit Pauli on {} qubits", p.num_qubits(), self.n)));
        }
        if self.stabilizers.iter().any(|s| s.anticommutes(p)) {
            return Ok(C64::new(0.0, 0.0));
        }
        // p = phase · ∏ S_i over the i whose destabilizer anticommutes with p
        let mut product = PauliString::identity(self.n);
        for (d, s) in self.destabilizers.iter().zip(&self.stabilizers) {
            if d.anticommutes(p) {
                product.mul_assign_right(s);
            }
        }
        debug_assert!(product.xbits == p.xbits && product.zbits == p.zbits);
        Ok((p.phase * product.phase.conj()).to_complex())
    }
}

fn is_hermitian(p: &PauliString) -> bool {
    (p.phase + 3 * p.y_count() as u32).exponent() % 2 == 0
}

/// Functional form of [`Tableau::apply`].
pub fn apply_clifford(t: &Tableau, g: &Gate) -> Result<Tableau> {
    let mut out = t.clone();
    out.apply(g)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::oracle::DenseState;

    fn dense_expectation(psi: &DenseState, p: &PauliString) -> C64 {
        let m = p.to_dense();
        let a = psi.amplitudes();
        let dim = a.len();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                acc += a[i].conj() * m[i * dim + j] * a[j];
            }
        }
        acc
    }

    #[test]
    fn hadamard_turns_z_into_x() {
        let t = apply_clifford(&Tableau::new(1), &Gate::one(GateKind::H, 0).unwrap()).unwrap();
        assert_eq!(t.stabilizers()[0], PauliString::parse("X").unwrap());
    }

    #[test]
    fn four_phase_gates_are_identity() {
        let s = Gate::one(GateKind::S, 1).unwrap();
        let mut t = Tableau::new(2);
        t.apply(&Gate::one(GateKind::H, 1).unwrap()).unwrap();
        let before = t.clone();
        for _ in 0..4 {
            t.apply(&s).unwrap();
        }
        assert_eq!(t, before);
    }

    #[test]
    fn rejects_non_clifford() {
        let mut t = Tableau::new(1);
        assert!(matches!(t.apply(&Gate::one(GateKind::T, 0).unwrap()), Err(Error::NonClifford(_))));
    }

    #[test]
    fn random_words_match_dense_simulation() {
        let mut state = 0x1234_5678u64;
        let mut next = |k: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % k
        };
        let n = 4;
        for _ in 0..10 {
            let mut t = Tableau::new(n);
            let mut psi = DenseState::zero(n);
            for _ in 0..50 {
                let a = next(n as u64) as usize;
                let b = (a + 1 + next(n as u64 - 1) as usize) % n;
                let g = match next(7) {
                    0 => Gate::one(GateKind::H, a),
                    1 => Gate::one(GateKind::S, a),
                    2 => Gate::one(GateKind::X, a),
                    3 => Gate::one(GateKind::Y, a),
                    4 => Gate::one(GateKind::Z, a),
                    5 => Gate::two(GateKind::Cnot, a, b),
                    _ => Gate::two(GateKind::Cz, a, b),
                }
                .unwrap();
                t.apply(&g).unwrap();
                psi.apply_gate(&g);
                t.check_invariants().unwrap();
            }
            for s in t.stabilizers() {
                assert!((dense_expectation(&psi, s) - 1.0).norm() < 1e-12);
            }
            for letters in ["XIZY", "ZZII", "IYXZ", "ZIZZ", "XXXX"] {
                let p = PauliString::parse(letters).unwrap();
                assert!((t.expectation(&p).unwrap() - dense_expectation(&psi, &p)).norm() < 1e-12);
            }
        }
    }
}
