use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitSpec, Gate, GateKind, NoiseParams, TwirlSite};
use crate::error::{Error, Result};
use crate::fast::{EnsembleKind, EnsembleSpec};
use crate::rng::CounterRng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig1bConfig {
    pub n: usize,
    /// Gates per Clifford block.
    pub clifford_depth: usize,
    /// Number of noisy T sites, `m`.
    pub t_count: usize,
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseParams,
    /// All wires when absent.
    #[serde(default)]
    pub measured_wires: Option<Vec<usize>>,
}

impl Fig1bConfig {
    pub fn new(n: usize, clifford_depth: usize, t_count: usize, seed: u64) -> Self {
        Fig1bConfig { n, clifford_depth, t_count, seed, noise: NoiseParams::noiseless(), measured_wires: None }
    }

    pub fn with_noise(mut self, noise: NoiseParams) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_measured(mut self, wires: Vec<usize>) -> Self {
        self.measured_wires = Some(wires);
        self
    }
}

/// Uniform word of `len` gates from `{H, S, CNOT}` (CNOT only when `n ≥ 2`).
pub fn random_clifford_word(n: usize, len: usize, rng: &mut CounterRng) -> Result<Vec<Gate>> {
    let choices = if n >= 2 { 3 } else { 2 };
    (0..len)
        .map(|_| match rng.below_usize(choices) {
            0 => Gate::one(GateKind::H, rng.below_usize(n)),
            1 => Gate::one(GateKind::S, rng.below_usize(n)),
            _ => {
                let c = rng.below_usize(n);
                let t = (c + 1 + rng.below_usize(n - 1)) % n;
                Gate::two(GateKind::Cnot, c, t)
            }
        })
        .collect()
}

/// Clifford blocks alternating with noisy T gates: `B_0 T B_1 T ⋯ T B_m`.
pub fn build_fig1b(cfg: &Fig1bConfig) -> Result<EnsembleSpec> {
    if cfg.n == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    let mut rng = CounterRng::new(cfg.seed);
    let mut gates = random_clifford_word(cfg.n, cfg.clifford_depth, &mut rng)?;
    let mut sites = Vec::with_capacity(cfg.t_count);
    for id in 0..cfg.t_count {
        let wire = rng.below_usize(cfg.n);
        sites.push(TwirlSite { id, wire, position: gates.len() });
        gates.push(Gate::one(GateKind::T, wire)?);
        gates.extend(random_clifford_word(cfg.n, cfg.clifford_depth, &mut rng)?);
    }
    let measured = cfg.measured_wires.clone().unwrap_or_else(|| (0..cfg.n).collect());
    let c = CircuitSpec::new(cfg.n, gates, sites, measured, vec![])?;
    EnsembleSpec::new(EnsembleKind::CliffordPerfectT, c, cfg.noise)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_t_gates_is_pure_clifford() {
        let e = build_fig1b(&Fig1bConfig::new(3, 5, 0, 1)).unwrap();
        assert_eq!(e.m(), 0);
        assert!(e.circuit.gates.iter().all(Gate::is_clifford));
    }

    #[test]
    fn sites_tag_t_gates() {
        let e = build_fig1b(&Fig1bConfig::new(2, 4, 3, 7)).unwrap();
        assert_eq!(e.m(), 3);
        for s in &e.circuit.twirl_sites {
            assert_eq!(e.circuit.gates[s.position].kind, GateKind::T);
            assert_eq!(e.circuit.gates[s.position].targets, vec![s.wire]);
        }
        assert_eq!(e, build_fig1b(&Fig1bConfig::new(2, 4, 3, 7)).unwrap());
    }

    #[test]
    fn single_qubit_words_avoid_cnot() {
        let mut rng = CounterRng::new(2);
        let w = random_clifford_word(1, 50, &mut rng).unwrap();
        assert!(w.iter().all(|g| g.targets.len() == 1));
    }
}
