//! Dense ground truth for small instances.
//!
//! Every ensemble member is simulated directly: statevectors for the
//! noiseless distribution `q_{x|y}` and density matrices for the noisy
//! `q'_{x|y}`. Nothing here is clever, which is the point; the fast
//! evaluator is checked against it.

mod density;
mod mixture;
mod state;

use rayon::prelude::*;

pub use density::{apply_noise_channel, DenseDensity};
pub use mixture::{mixture_forward, mixture_inverse, mixture_jacobian_det, PauliMixture};
pub use state::DenseState;

use crate::bits::Bits;
use crate::circuit::{CircuitSpec, NoiseParams};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OracleCaps {
    pub statevector_qubits: usize,
    pub density_qubits: usize,
    /// Cap on `2m`, the number of twirl bits enumerated by [`joint_tables`].
    pub joint_bits: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { statevector_qubits: 12, density_qubits: 7, joint_bits: 16 }
    }
}

/// Outcome distribution over the measured wires, indexed by the outcome
/// integer (bit `k` ↔ `measured_wires[k]`).
pub type Distribution = Vec<f64>;

fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        return Err(Error::CapExceeded { what, value, cap });
    }
    Ok(())
}

/// `q_{x|y} = |(⟨x| ⊗ I) U_y |0⟩|²`.
pub fn output_distribution_pure(c: &CircuitSpec, y: &Bits, caps: &OracleCaps) -> Result<Distribution> {
    cap("qubit count (statevector)", c.n, caps.statevector_qubits)?;
    c.check_y(y)?;
    Ok(run_pure(c, y).marginal(&c.measured_wires))
}

/// Final statevector `U_y |0⟩` including any pre-measurement rotations.
pub fn final_state(c: &CircuitSpec, y: &Bits, caps: &OracleCaps) -> Result<DenseState> {
    cap("qubit count (statevector)", c.n, caps.statevector_qubits)?;
    c.check_y(y)?;
    Ok(run_pure(c, y))
}

fn run_pure(c: &CircuitSpec, y: &Bits) -> DenseState {
    let by_pos = c.sites_by_position();
    let mut psi = DenseState::zero(c.n);
    for (p, g) in c.gates.iter().enumerate() {
        psi.apply_gate(g);
        for &k in &by_pos[p] {
            let (z, x) = c.twirl_bits(y, k);
            psi.apply_pauli(c.twirl_sites[k].wire, x, z);
        }
    }
    for g in &c.pre_measure_rotations {
        psi.apply_gate(g);
    }
    psi
}

/// Final density matrix `Φ_y(|0⟩⟨0|)`.
pub fn final_density(c: &CircuitSpec, y: &Bits, np: &NoiseParams, caps: &OracleCaps) -> Result<DenseDensity> {
    cap("qubit count (density matrix)", c.n, caps.density_qubits)?;
    c.check_y(y)?;
    np.validate()?;
    let by_pos = c.sites_by_position();
    let mut rho = DenseDensity::zero(c.n);
    for (p, g) in c.gates.iter().enumerate() {
        rho.apply_gate(g);
        for &k in &by_pos[p] {
            let wire = c.twirl_sites[k].wire;
            let (z, x) = c.twirl_bits(y, k);
            rho.apply_pauli(wire, x, z);
            rho.apply_noise_in_place(wire, np);
        }
    }
    for g in &c.pre_measure_rotations {
        rho.apply_gate(g);
    }
    Ok(rho)
}

/// `q'_{x|y} = tr[Φ_y(|0⟩⟨0|) (|x⟩⟨x| ⊗ I)]`.
pub fn output_distribution_noisy(
    c: &CircuitSpec,
    y: &Bits,
    np: &NoiseParams,
    caps: &OracleCaps,
) -> Result<Distribution> {
    Ok(final_density(c, y, np, caps)?.marginal(&c.measured_wires))
}

/// Joint distribution `q_{x,y} = 4^{-m} q_{x|y}` over all outcomes and all twirl strings.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    m: usize,
    r: usize,
    /// `values[y_index << r | x_index]`
    values: Vec<f64>,
}

impl JointTable {
    pub fn from_values(m: usize, r: usize, values: Vec<f64>) -> Result<Self> {
        if 2 * m + r >= usize::BITS as usize || values.len() != 1usize << (2 * m + r) {
            return Err(Error::SizeMismatch(format!(
                "joint table needs 2^(2m+r) = 2^{} entries, got {}",
                2 * m + r,
                values.len()
            )));
        }
        Ok(JointTable { m, r, values })
    }

    /// Builds `4^{-m} q_{x|y}` from per-`y` conditionals in ascending `y` order.
    pub fn from_conditionals(m: usize, r: usize, rows: Vec<Distribution>) -> Result<Self> {
        let scale = 0.25f64.powi(m as i32);
        let values = rows.into_iter().flatten().map(|v| v * scale).collect();
        JointTable::from_values(m, r, values)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: &Bits, y: &Bits) -> Result<f64> {
        if x.len() != self.r || y.len() != 2 * self.m {
            return Err(Error::SizeMismatch("outcome or twirl string has the wrong length".into()));
        }
        Ok(self.values[(y.index() << self.r) | x.index()])
    }

    pub fn at(&self, x_index: usize, y_index: usize) -> f64 {
        self.values[(y_index << self.r) | x_index]
    }

    /// Conditional `q_{x|y} = 4^m q_{x,y}` for one `y`.
    pub fn conditional(&self, y_index: usize) -> Distribution {
        let scale = 4f64.powi(self.m as i32);
        let width = 1usize << self.r;
        self.values[y_index * width..(y_index + 1) * width].iter().map(|v| v * scale).collect()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn check_joint(c: &CircuitSpec, caps: &OracleCaps) -> Result<()> {
    cap("twirl bit count 2m", 2 * c.m(), caps.joint_bits)
}

/// All twirl strings of length `2m` in ascending integer order.
pub fn all_y(m: usize) -> impl Iterator<Item = Bits> {
    (0..1u64 << (2 * m)).map(move |v| Bits::from_u64(v, 2 * m))
}

pub fn joint_table_pure(c: &CircuitSpec, caps: &OracleCaps) -> Result<JointTable> {
    check_joint(c, caps)?;
    cap("qubit count (statevector)", c.n, caps.statevector_qubits)?;
    let ys: Vec<Bits> = all_y(c.m()).collect();
    let rows: Vec<Distribution> =
        ys.par_iter().map(|y| run_pure(c, y).marginal(&c.measured_wires)).collect();
    JointTable::from_conditionals(c.m(), c.r(), rows)
}

pub fn joint_table_noisy(c: &CircuitSpec, np: &NoiseParams, caps: &OracleCaps) -> Result<JointTable> {
    check_joint(c, caps)?;
    cap("qubit count (density matrix)", c.n, caps.density_qubits)?;
    np.validate()?;
    let ys: Vec<Bits> = all_y(c.m()).collect();
    let rows = ys
        .par_iter()
        .map(|y| output_distribution_noisy(c, y, np, caps))
        .collect::<Result<Vec<_>>>()?;
    JointTable::from_conditionals(c.m(), c.r(), rows)
}

/// Noiseless and noisy joint tables `(q, q')`.
pub fn joint_tables(c: &CircuitSpec, np: &NoiseParams, caps: &OracleCaps) -> Result<(JointTable, JointTable)> {
    Ok((joint_table_pure(c, caps)?, joint_table_noisy(c, np, caps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind, TwirlSite};

    fn spec(n: usize, gates: Vec<Gate>, sites: Vec<TwirlSite>, measured: Vec<usize>) -> CircuitSpec {
        CircuitSpec::new(n, gates, sites, measured, vec![]).unwrap()
    }

    #[test]
    fn empty_circuit_is_point_mass() {
        let c = spec(3, vec![], vec![], vec![0, 1, 2]);
        let d = output_distribution_pure(&c, &Bits::zeros(0), &OracleCaps::default()).unwrap();
        assert_eq!(d[0], 1.0);
        assert!(d[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hadamard_is_fair_coin() {
        let c = spec(2, vec![Gate::one(GateKind::H, 1).unwrap()], vec![], vec![1]);
        let d = output_distribution_pure(&c, &Bits::zeros(0), &OracleCaps::default()).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn x_flip_symmetrises_single_site() {
        let c = spec(
            1,
            vec![Gate::one(GateKind::Z, 0).unwrap()],
            vec![TwirlSite { id: 0, wire: 0, position: 0 }],
            vec![0],
        );
        let mut rho = DenseDensity::zero(1);
        rho.apply_noise_in_place(0, &NoiseParams { e1: 0.0, e2: 0.5, e3: 0.0 });
        let d = rho.marginal(&[0]);
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.5).abs() < 1e-15);
        // the same circuit through the validated entry point at e2 just below 1/2
        let np = NoiseParams::new(0.0, 0.499_999, 0.0).unwrap();
        let d = output_distribution_noisy(&c, &"00".parse().unwrap(), &np, &OracleCaps::default()).unwrap();
        assert!((d[0] - 0.500_001).abs() < 1e-12);
    }

    #[test]
    fn caps_are_enforced() {
        let caps = OracleCaps { statevector_qubits: 2, density_qubits: 1, joint_bits: 2 };
        let c = spec(3, vec![], vec![], vec![0]);
        assert!(matches!(
            output_distribution_pure(&c, &Bits::zeros(0), &caps),
            Err(Error::CapExceeded { .. })
        ));
        let c = spec(2, vec![], vec![], vec![0]);
        assert!(matches!(
            output_distribution_noisy(&c, &Bits::zeros(0), &NoiseParams::noiseless(), &caps),
            Err(Error::CapExceeded { .. })
        ));
        let h = Gate::one(GateKind::H, 0).unwrap();
        let sites = (0..2).map(|k| TwirlSite { id: k, wire: 0, position: k }).collect();
        let c = spec(1, vec![h.clone(), h], sites, vec![0]);
        assert!(matches!(joint_table_pure(&c, &caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn joint_table_without_sites_is_the_distribution() {
        let c = spec(1, vec![Gate::one(GateKind::H, 0).unwrap()], vec![], vec![0]);
        let q = joint_table_pure(&c, &OracleCaps::default()).unwrap();
        assert_eq!(q.values().len(), 2);
        assert!((q.at(0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_sites_give_uniform_marginal() {
        let c = spec(
            1,
            vec![Gate::one(GateKind::Z, 0).unwrap()],
            vec![TwirlSite { id: 0, wire: 0, position: 0 }],
            vec![0],
        );
        let q = joint_table_pure(&c, &OracleCaps::default()).unwrap();
        for y in 0..4 {
            let cond = output_distribution_pure(&c, &Bits::from_u64(y as u64, 2), &OracleCaps::default()).unwrap();
            for x in 0..2 {
                assert!((q.at(x, y) - 0.25 * cond[x]).abs() < 1e-15);
            }
        }
        assert!((q.total() - 1.0).abs() < 1e-12);
    }
}
