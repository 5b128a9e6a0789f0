#![allow(dead_code)]

use noisy_fourier::circuit::{CircuitSpec, Gate, GateKind, NoiseParams};
use noisy_fourier::ensembles::{build_fig1a, build_fig1b, random_u3, Fig1bConfig, GeneratorConfig, WhiteBoxSet};
use noisy_fourier::fast::{EnsembleKind, EnsembleSpec, FastConfig, FastEvaluator};
use noisy_fourier::fourier::{wht_forward, FourierIndex};
use noisy_fourier::oracle::{joint_table_pure, OracleCaps};
use noisy_fourier::rng::CounterRng;
use noisy_fourier::Bits;

/// Random Clifford+non-Clifford instance with `n ≤ 4`, `m ≤ 6`.
///
/// Mixes T gates with random single-qubit rotations at the sites, measured
/// subsets and pre-measurement rotations.
pub fn random_clifford_t(seed: u64) -> EnsembleSpec {
    let mut rng = CounterRng::new(seed ^ 0x5eed);
    let n = 1 + rng.below_usize(4);
    let t = rng.below_usize(7);
    let depth = 2 + rng.below_usize(5);
    let noise = NoiseParams::new(0.3 * rng.next_f64(), 0.3 * rng.next_f64(), 0.0).unwrap();
    let base = build_fig1b(&Fig1bConfig::new(n, depth, t, seed).with_noise(noise)).unwrap();
    let mut c = base.circuit.clone();
    for s in &c.twirl_sites {
        if rng.next_bool() {
            c.gates[s.position] = Gate::one(GateKind::Unitary1(random_u3(&mut rng)), s.wire).unwrap();
        }
    }
    let mut measured: Vec<usize> = (0..n).filter(|_| rng.below_usize(3) > 0).collect();
    if measured.is_empty() {
        measured.push(rng.below_usize(n));
    }
    if rng.next_bool() {
        measured.reverse();
    }
    let mut rotations = Vec::new();
    if rng.next_bool() {
        for &w in &measured {
            if rng.next_bool() {
                rotations.push(Gate::one(GateKind::Unitary1(random_u3(&mut rng)), w).unwrap());
            }
        }
    }
    let c = CircuitSpec::new(c.n, c.gates, c.twirl_sites, measured, rotations).unwrap();
    EnsembleSpec::new(EnsembleKind::CliffordPerfectT, c, noise).unwrap()
}

pub fn small_fig1a(seed: u64, n: usize, d: usize, eps: f64) -> EnsembleSpec {
    let sets = [WhiteBoxSet::HTCnot, WhiteBoxSet::HSCnotT, WhiteBoxSet::RandomSu4];
    let set = sets[(seed % 3) as usize];
    let cfg = GeneratorConfig::new(n, d, seed, set).with_noise(NoiseParams::symmetric(eps).unwrap());
    build_fig1a(&cfg).unwrap()
}

/// Largest `|fast − oracle|` over every `(x, s)`.
pub fn fast_vs_oracle(e: &EnsembleSpec) -> f64 {
    let (m, r) = (e.m(), e.r());
    let spectrum = wht_forward(&joint_table_pure(&e.circuit, &OracleCaps::default()).unwrap());
    let ev = FastEvaluator::new(e, FastConfig::default()).unwrap();
    let mut worst = 0.0f64;
    for si in 0..1usize << (2 * m) {
        let s = FourierIndex::from_index(si, m);
        let (values, _) = ev.components_all_x(&s).unwrap();
        for (xi, v) in values.iter().enumerate() {
            let exact = spectrum.get(&Bits::from_u64(xi as u64, r), &s);
            worst = worst.max((v - exact).abs());
        }
    }
    worst
}
