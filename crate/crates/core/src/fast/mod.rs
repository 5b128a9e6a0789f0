//! Low-weight Fourier evaluation for Clifford circuits with noisy non-Clifford
//! sites, and oracle-backed checks of the all-noisy ensemble.

mod enumerate;
mod heisenberg;
mod series;
mod uniformity;

use serde::{Deserialize, Serialize};

pub use enumerate::{enumerate_low_weight, low_weight_count, LowWeight};
pub use heisenberg::FastEvaluator;
pub use series::{approximate_distribution, approximate_output, TruncatedSeries};
pub use uniformity::{
    support_vanishing_check, theorem1_experiment, wire_layers, SupportReport, Theorem1Report, Theorem1Row,
};

use crate::bits::Bits;
use crate::circuit::{CircuitSpec, NoiseParams};
use crate::error::{Error, Result};
use crate::fourier::FourierIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// A twirl site on every gate output.
    AllNoisy,
    /// Noiseless Clifford gates; each non-Clifford single-qubit gate is followed by a site.
    CliffordPerfectT,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub circuit: CircuitSpec,
    pub noise: NoiseParams,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, circuit: CircuitSpec, noise: NoiseParams) -> Result<Self> {
        let e = EnsembleSpec { kind, circuit, noise };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        self.noise.validate()?;
        let c = &self.circuit;
        let has_site = |p: usize, w: usize| c.twirl_sites.iter().any(|s| s.position == p && s.wire == w);
        match self.kind {
            EnsembleKind::AllNoisy => {
                for (p, g) in c.gates.iter().enumerate() {
                    if let Some(&w) = g.targets.iter().find(|&&w| !has_site(p, w)) {
                        return Err(Error::InvalidCircuit(format!("output wire {w} of gate {p} carries no twirl site")));
                    }
                }
            }
            EnsembleKind::CliffordPerfectT => {
                for s in &c.twirl_sites {
                    let g = &c.gates[s.position];
                    if g.is_clifford() || g.targets != [s.wire] {
                        return Err(Error::Precondition(format!(
                            "twirl site {} does not follow a single-qubit non-Clifford gate on wire {}",
                            s.id, s.wire
                        )));
                    }
                }
                for (p, g) in c.gates.iter().enumerate() {
                    if !g.is_clifford() && !has_site(p, g.targets[0]) {
                        return Err(Error::Precondition(format!("non-Clifford gate {p} carries no twirl site")));
                    }
                }
                if let Some(g) = c.pre_measure_rotations.iter().find(|g| !g.is_clifford() && g.kind.arity() > 1) {
                    return Err(Error::Precondition(format!("two-qubit non-Clifford rotation {}", g.kind.name())));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.circuit.m()
    }

    pub fn r(&self) -> usize {
        self.circuit.r()
    }

    pub(crate) fn require(&self, kind: EnsembleKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Precondition(format!("operation needs a {kind:?} ensemble, got {:?}", self.kind)));
        }
        Ok(())
    }

    pub(crate) fn check_sizes(&self, x: Option<&Bits>, s: Option<&FourierIndex>, y: Option<&Bits>) -> Result<()> {
        if let Some(x) = x {
            if x.len() != self.r() {
                return Err(Error::SizeMismatch(format!("outcome of {} bits for r = {}", x.len(), self.r())));
            }
        }
        if let Some(s) = s {
            if s.m() != self.m() {
                return Err(Error::SizeMismatch(format!("dual index for m = {} on m = {}", s.m(), self.m())));
            }
        }
        if let Some(y) = y {
            self.circuit.check_y(y)?;
        }
        Ok(())
    }
}

/// Limits that make the evaluator refuse work instead of thrashing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastConfig {
    /// Largest number of Pauli terms alive during one propagation.
    pub max_live_terms: usize,
    /// Largest number of dual indices a truncated series may enumerate.
    pub max_indices: usize,
    /// Largest number of measured wires.
    pub max_measured: usize,
}

impl Default for FastConfig {
    fn default() -> Self {
        FastConfig { max_live_terms: 1 << 20, max_indices: 1 << 22, max_measured: 16 }
    }
}

/// Work done by one truncated evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermBudget {
    pub l: usize,
    /// Dual indices visited.
    pub enumerated: usize,
    /// Pauli strings evaluated against the vacuum.
    pub pauli_terms: usize,
    /// `(8m)^l`.
    pub bound: f64,
}

impl TermBudget {
    pub fn new(m: usize, l: usize) -> Self {
        TermBudget { l, enumerated: 0, pauli_terms: 0, bound: (8.0 * m as f64).powi(l as i32) }
    }

    /// `enumerated · 4^l · 2^r`, the cap for single-qubit diagonal non-Clifford gates.
    pub fn term_cap(&self, r: usize) -> f64 {
        self.enumerated as f64 * 4f64.powi(self.l as i32) * 2f64.powi(r as i32)
    }
}

/// `(1−2e1)^{|s1|} (1−2e2)^{|s2|}` extended by `(1−2e3)^{|s1⊕s2|}`.
pub fn decay(s: &FourierIndex, np: &NoiseParams) -> f64 {
    crate::fourier::decay_factor(s, np)
}

/// Component `q̂_{x,s}` of a Clifford-plus-noisy-gate ensemble.
pub fn fourier_component_fast(e: &EnsembleSpec, x: &Bits, s: &FourierIndex) -> Result<f64> {
    FastEvaluator::new(e, FastConfig::default())?.component(x, s).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind, TwirlSite};

    fn site(id: usize, wire: usize, position: usize) -> TwirlSite {
        TwirlSite { id, wire, position }
    }

    #[test]
    fn clifford_t_structure_is_checked() {
        let gates = vec![Gate::one(GateKind::H, 0).unwrap(), Gate::one(GateKind::T, 0).unwrap()];
        let ok = CircuitSpec::new(1, gates.clone(), vec![site(0, 0, 1)], vec![0], vec![]).unwrap();
        EnsembleSpec::new(EnsembleKind::CliffordPerfectT, ok, NoiseParams::noiseless()).unwrap();

        let on_clifford = CircuitSpec::new(1, gates.clone(), vec![site(0, 0, 0)], vec![0], vec![]).unwrap();
        assert!(EnsembleSpec::new(EnsembleKind::CliffordPerfectT, on_clifford, NoiseParams::noiseless()).is_err());

        let bare_t = CircuitSpec::new(1, gates, vec![], vec![0], vec![]).unwrap();
        assert!(EnsembleSpec::new(EnsembleKind::CliffordPerfectT, bare_t, NoiseParams::noiseless()).is_err());
    }

    #[test]
    fn all_noisy_structure_is_checked() {
        let gates = vec![Gate::two(GateKind::Cnot, 0, 1).unwrap()];
        let half = CircuitSpec::new(2, gates.clone(), vec![site(0, 0, 0)], vec![0], vec![]).unwrap();
        assert!(EnsembleSpec::new(EnsembleKind::AllNoisy, half, NoiseParams::noiseless()).is_err());
        let full = CircuitSpec::new(2, gates, vec![site(0, 0, 0), site(1, 1, 0)], vec![0], vec![]).unwrap();
        EnsembleSpec::new(EnsembleKind::AllNoisy, full, NoiseParams::noiseless()).unwrap();
    }

    #[test]
    fn budget_bound_is_eight_m_to_the_l() {
        let b = TermBudget::new(5, 3);
        assert_eq!(b.bound, 64000.0);
    }
}
