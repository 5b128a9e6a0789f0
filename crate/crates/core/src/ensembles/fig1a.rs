use serde::{Deserialize, Serialize};

use super::su4::{random_su4, random_u3};
use crate::circuit::{CircuitSpec, Gate, GateKind, NoiseParams, TwirlSite};
use crate::error::{Error, Result};
use crate::fast::{EnsembleKind, EnsembleSpec};
use crate::rng::CounterRng;

/// Gate family drawn for the white boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WhiteBoxSet {
    /// `{H, T, CNOT}`
    HTCnot,
    /// `{H, S, CNOT, T}`
    HSCnotT,
    /// Fifteen-angle two-qubit unitaries on pairs, Euler rotations elsewhere.
    RandomSu4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Pairs `(w, w+1)` starting at wire `k mod 2` in layer `k`.
    Brickwork,
    /// Explicit pairs per layer, reused cyclically.
    Custom(Vec<Vec<[usize; 2]>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub white_box_set: WhiteBoxSet,
    pub layout: Layout,
    #[serde(default)]
    pub noise: NoiseParams,
    /// All wires when absent.
    #[serde(default)]
    pub measured_wires: Option<Vec<usize>>,
}

impl GeneratorConfig {
    pub fn new(n: usize, d: usize, seed: u64, white_box_set: WhiteBoxSet) -> Self {
        GeneratorConfig {
            n,
            d,
            seed,
            white_box_set,
            layout: Layout::Brickwork,
            noise: NoiseParams::noiseless(),
            measured_wires: None,
        }
    }

    pub fn with_noise(mut self, noise: NoiseParams) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_measured(mut self, wires: Vec<usize>) -> Self {
        self.measured_wires = Some(wires);
        self
    }

    fn pairs(&self, layer: usize) -> Result<Vec<[usize; 2]>> {
        match &self.layout {
            Layout::Brickwork => Ok((layer % 2..self.n.saturating_sub(1)).step_by(2).map(|w| [w, w + 1]).collect()),
            Layout::Custom(layers) => {
                if layers.is_empty() {
                    return Err(Error::InvalidParameter("custom layout has no layers".into()));
                }
                let pairs = layers[layer % layers.len()].clone();
                let mut used = vec![false; self.n];
                for &[a, b] in &pairs {
                    for w in [a, b] {
                        if w >= self.n || used[w] {
                            return Err(Error::InvalidParameter(format!("custom layer {layer}: wire {w} reused or missing")));
                        }
                        used[w] = true;
                    }
                }
                Ok(pairs)
            }
        }
    }
}

fn one_qubit(set: WhiteBoxSet, rng: &mut CounterRng) -> GateKind {
    match set {
        WhiteBoxSet::HTCnot => [GateKind::H, GateKind::T][rng.below_usize(2)].clone(),
        WhiteBoxSet::HSCnotT => [GateKind::H, GateKind::S, GateKind::T][rng.below_usize(3)].clone(),
        WhiteBoxSet::RandomSu4 => GateKind::Unitary1(random_u3(rng)),
    }
}

/// Brickwork ensemble with a twirl site on every gate output.
///
/// Every wire receives exactly one gate per layer, so each wire carries `d`
/// sites and layer `k` is the `k`-th site of every wire.
pub fn build_fig1a(cfg: &GeneratorConfig) -> Result<EnsembleSpec> {
    if cfg.n == 0 || cfg.d == 0 {
        return Err(Error::InvalidParameter(format!("need n ≥ 1 and d ≥ 1, got n = {}, d = {}", cfg.n, cfg.d)));
    }
    let mut rng = CounterRng::new(cfg.seed);
    let mut gates = Vec::new();
    let mut sites = Vec::new();
    let mut push = |g: Gate, gates: &mut Vec<Gate>| {
        let position = gates.len();
        for &wire in &g.targets {
            sites.push(TwirlSite { id: sites.len(), wire, position });
        }
        gates.push(g);
    };
    for layer in 0..cfg.d {
        let pairs = cfg.pairs(layer)?;
        let mut paired = vec![false; cfg.n];
        for &[a, b] in &pairs {
            paired[a] = true;
            paired[b] = true;
            match cfg.white_box_set {
                WhiteBoxSet::RandomSu4 => push(Gate::new(GateKind::Unitary2(random_su4(&mut rng)), vec![a, b])?, &mut gates),
                set => {
                    if rng.next_bool() {
                        let (c, t) = if rng.next_bool() { (a, b) } else { (b, a) };
                        push(Gate::two(GateKind::Cnot, c, t)?, &mut gates);
                    } else {
                        push(Gate::one(one_qubit(set, &mut rng), a)?, &mut gates);
                        push(Gate::one(one_qubit(set, &mut rng), b)?, &mut gates);
                    }
                }
            }
        }
        for w in (0..cfg.n).filter(|&w| !paired[w]) {
            push(Gate::one(one_qubit(cfg.white_box_set, &mut rng), w)?, &mut gates);
        }
    }
    let measured = cfg.measured_wires.clone().unwrap_or_else(|| (0..cfg.n).collect());
    let c = CircuitSpec::new(cfg.n, gates, sites, measured, vec![])?;
    EnsembleSpec::new(EnsembleKind::AllNoisy, c, cfg.noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::depth_of;

    #[test]
    fn single_wire_structure() {
        let e = build_fig1a(&GeneratorConfig::new(1, 2, 9, WhiteBoxSet::HTCnot)).unwrap();
        assert_eq!(e.m(), 2);
        assert_eq!(depth_of(&e.circuit), 2);
    }

    #[test]
    fn depth_and_site_count() {
        for set in [WhiteBoxSet::HTCnot, WhiteBoxSet::HSCnotT, WhiteBoxSet::RandomSu4] {
            for n in 1..5 {
                for d in 1..5 {
                    let e = build_fig1a(&GeneratorConfig::new(n, d, 17, set)).unwrap();
                    assert_eq!(depth_of(&e.circuit), d);
                    assert_eq!(e.m(), n * d);
                }
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let cfg = GeneratorConfig::new(4, 3, 42, WhiteBoxSet::RandomSu4);
        assert_eq!(build_fig1a(&cfg).unwrap(), build_fig1a(&cfg).unwrap());
        let other = GeneratorConfig { seed: 43, ..cfg.clone() };
        assert_ne!(build_fig1a(&cfg).unwrap(), build_fig1a(&other).unwrap());
    }

    #[test]
    fn custom_layout_is_validated() {
        let mut cfg = GeneratorConfig::new(3, 2, 1, WhiteBoxSet::HTCnot);
        cfg.layout = Layout::Custom(vec![vec![[0, 2]], vec![[1, 2]]]);
        let e = build_fig1a(&cfg).unwrap();
        assert_eq!(depth_of(&e.circuit), 2);
        cfg.layout = Layout::Custom(vec![vec![[0, 1], [1, 2]]]);
        assert!(build_fig1a(&cfg).is_err());
        assert!(build_fig1a(&GeneratorConfig::new(0, 2, 1, WhiteBoxSet::HTCnot)).is_err());
    }
}
