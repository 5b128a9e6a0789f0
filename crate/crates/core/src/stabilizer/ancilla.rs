//! Dense check of the ancilla encoding of twirl Paulis: the bits of `y` are
//! loaded into ancilla qubits and `X^{y2} Z^{y1}` is applied as a controlled-Z
//! followed by a controlled-X.

use crate::bits::Bits;
use crate::circuit::{CircuitSpec, Gate, GateKind};
use crate::error::{Error, Result};
use crate::oracle::DenseState;

/// Largest register (system plus two ancillas per site) the check will build.
const MAX_QUBITS: usize = 12;

/// Output distribution of `c` at `y` computed with ancilla-controlled twirls.
pub fn ancilla_encoded_distribution(c: &CircuitSpec, y: &Bits) -> Result<Vec<f64>> {
    let m = c.m();
    let total = c.n + 2 * m;
    if total > MAX_QUBITS {
        return Err(Error::CapExceeded { what: "qubits with ancillas", value: total, cap: MAX_QUBITS });
    }
    if y.len() != 2 * m {
        return Err(Error::SizeMismatch(format!("twirl string of {} bits for m = {m}", y.len())));
    }
    let mut psi = DenseState::zero(total);
    for k in 0..m {
        let (z, x) = c.twirl_bits(y, k);
        if z {
            psi.apply_gate(&Gate::one(GateKind::X, c.n + 2 * k)?);
        }
        if x {
            psi.apply_gate(&Gate::one(GateKind::X, c.n + 2 * k + 1)?);
        }
    }
    let by_pos = c.sites_by_position();
    for (p, g) in c.gates.iter().enumerate() {
        psi.apply_gate(g);
        for &k in &by_pos[p] {
            let wire = c.twirl_sites[k].wire;
            psi.apply_gate(&Gate::two(GateKind::Cz, c.n + 2 * k, wire)?);
            psi.apply_gate(&Gate::two(GateKind::Cnot, c.n + 2 * k + 1, wire)?);
        }
    }
    for g in &c.pre_measure_rotations {
        psi.apply_gate(g);
    }
    Ok(psi.marginal(&c.measured_wires))
}
