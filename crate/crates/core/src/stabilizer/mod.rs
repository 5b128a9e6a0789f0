//! Clifford machinery: Pauli conjugation, stabilizer tableaux, vacuum
//! expectations and the Pauli expansion of single-qubit gates.

mod ancilla;
mod tableau;

pub use ancilla::ancilla_encoded_distribution;
pub use tableau::{apply_clifford, Tableau};

use num_complex::Complex64 as C64;

use crate::circuit::{check_unitary, Gate, GateKind, Mat2};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Coefficients below this magnitude are dropped from a decomposition.
pub const DECOMPOSITION_CUTOFF: f64 = 1e-14;

fn check_wires(p: &PauliString, g: &Gate) -> Result<()> {
    let n = p.num_qubits();
    match g.targets.iter().find(|&&w| w >= n) {
        Some(&w) => Err(Error::OutOfRange { index: w, len: n }),
        None => Ok(()),
    }
}

/// `p ← g p g†` for a Clifford gate.
pub(crate) fn conjugate_in_place(p: &mut PauliString, g: &Gate) -> Result<()> {
    check_wires(p, g)?;
    let t = &g.targets;
    match g.kind {
        GateKind::H => {
            let (a, b) = p.site(t[0]);
            // H X^a Z^b H = Z^a X^b = (−1)^{ab} X^b Z^a
            p.phase = p.phase + 2 * (a & b) as u32;
            p.xbits.put(t[0], b);
            p.zbits.put(t[0], a);
        }
        GateKind::S => {
            let (a, _) = p.site(t[0]);
            // S X S† = iXZ
            p.phase = p.phase + a as u32;
            if a {
                p.zbits.flip(t[0]);
            }
        }
        GateKind::X => {
            let (_, b) = p.site(t[0]);
            p.phase = p.phase + 2 * b as u32;
        }
        GateKind::Z => {
            let (a, _) = p.site(t[0]);
            p.phase = p.phase + 2 * a as u32;
        }
        GateKind::Y => {
            let (a, b) = p.site(t[0]);
            p.phase = p.phase + 2 * (a ^ b) as u32;
        }
        GateKind::Cnot => {
            let (c, tg) = (t[0], t[1]);
            if p.xbits.bit(c) {
                p.xbits.flip(tg);
            }
            if p.zbits.bit(tg) {
                p.zbits.flip(c);
            }
        }
        GateKind::Cz => {
            let (a, b) = (t[0], t[1]);
            let (xa, xb) = (p.xbits.bit(a), p.xbits.bit(b));
            p.phase = p.phase + 2 * (xa & xb) as u32;
            if xb {
                p.zbits.flip(a);
            }
            if xa {
                p.zbits.flip(b);
            }
        }
        _ => return Err(Error::NonClifford(g.kind.name().into())),
    }
    Ok(())
}

/// `p ← g† p g`.
pub(crate) fn conjugate_inverse_in_place(p: &mut PauliString, g: &Gate) -> Result<()> {
    if g.kind == GateKind::S {
        for _ in 0..3 {
            conjugate_in_place(p, g)?;
        }
        Ok(())
    } else {
        conjugate_in_place(p, g)
    }
}

/// `C p C†` for the word `C = g_k ⋯ g_1` (gates listed in time order).
pub fn conjugate_pauli(gates: &[Gate], p: &PauliString) -> Result<PauliString> {
    let mut out = p.clone();
    for g in gates {
        conjugate_in_place(&mut out, g)?;
    }
    Ok(out)
}

/// Gate list of `C†`: reversed, with every `S` replaced by `S S S`.
pub fn inverse_word(gates: &[Gate]) -> Result<Vec<Gate>> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates.iter().rev() {
        if !g.is_clifford() {
            return Err(Error::NonClifford(g.kind.name().into()));
        }
        let copies = if g.kind == GateKind::S { 3 } else { 1 };
        out.extend(std::iter::repeat(g.clone()).take(copies));
    }
    Ok(out)
}

/// `⟨0…0| p |0…0⟩`: the phase for a pure Z/I string, otherwise zero.
pub fn vacuum_expectation(p: &PauliString) -> C64 {
    if p.xbits.is_zero() {
        p.phase.to_complex()
    } else {
        C64::new(0.0, 0.0)
    }
}

/// `U = Σ_P α_P P` over the Hermitian single-qubit Paulis.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliDecomposition {
    pub terms: Vec<(C64, PauliString)>,
}

impl PauliDecomposition {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn reconstruct(&self) -> Mat2 {
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for (alpha, p) in &self.terms {
            let d = p.to_dense();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v += alpha * d[i * 2 + j];
                }
            }
        }
        m
    }

    pub fn weight_norm(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.norm_sqr()).sum()
    }
}

pub(crate) fn hermitian_paulis() -> [PauliString; 4] {
    ["I", "X", "Y", "Z"].map(|s| PauliString::parse(s).expect("literal"))
}

/// `α_P = tr(P† U) / 2`, dropping negligible terms.
pub fn pauli_decompose_1q(u: &Mat2) -> Result<PauliDecomposition> {
    let flat = [u[0][0], u[0][1], u[1][0], u[1][1]];
    check_unitary(&flat, 2)?;
    let mut terms = Vec::new();
    for p in hermitian_paulis() {
        let d = p.to_dense();
        // P is Hermitian, so tr(P† U) = Σ_ij conj(P_ij) U_ij
        let alpha: C64 = (0..4).map(|k| d[k].conj() * flat[k]).sum::<C64>() * 0.5;
        if alpha.norm() >= DECOMPOSITION_CUTOFF {
            terms.push((alpha, p));
        }
    }
    Ok(PauliDecomposition { terms })
}
