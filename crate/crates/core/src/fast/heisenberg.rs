//! Backward (Heisenberg-picture) propagation of the readout projector.
//!
//! Summing a twirl site over its four Paulis with signs `(−1)^{s·y}` keeps
//! exactly one Pauli component `X^a Z^b`, `(a, b) = (s1[k], s2[k])`, of the
//! operator on that wire. Writing `|x⟩⟨x| = 2^{−r} Σ_t (−1)^{x·t} Z_t` and
//! pulling each `Z_t` back through the circuit, every component becomes a
//! short sum of vacuum expectations:
//!
//! ```text
//! q̂_{x,s} = 2^{−m} 2^{−r} Σ_t (−1)^{x·t} ⟨0| E_s†(Z_t) |0⟩
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::{EnsembleKind, EnsembleSpec, FastConfig};
use crate::bits::Bits;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::fourier::FourierIndex;
use crate::pauli::{pauli_mul, sigma_from_bits, Phase, PauliString};
use crate::stabilizer::{conjugate_inverse_in_place, pauli_decompose_1q, vacuum_expectation, DECOMPOSITION_CUTOFF};

/// `U† σ U` for the four `σ = X^a Z^b`, indexed by `a | b << 1`.
type Expansion = [Vec<((bool, bool), C64)>; 4];

type Terms = BTreeMap<(Bits, Bits), C64>;

enum Step {
    Clifford,
    Expand(Box<Expansion>),
}

/// Precomputed propagation data for one ensemble.
pub struct FastEvaluator<'a> {
    e: &'a EnsembleSpec,
    cfg: FastConfig,
    by_pos: Vec<Vec<usize>>,
    gate_steps: Vec<Step>,
    rotation_steps: Vec<Step>,
}

fn expansion(u: &[[C64; 2]; 2]) -> Result<Expansion> {
    let d = pauli_decompose_1q(u)?;
    let mut out: Expansion = Default::default();
    for (idx, slot) in out.iter_mut().enumerate() {
        let q = sigma_from_bits(idx & 1 == 1, idx & 2 == 2);
        let mut acc: BTreeMap<(bool, bool), C64> = BTreeMap::new();
        // U† Q U = Σ conj(α_P) α_P' · P Q P'
        for (ap, p) in &d.terms {
            let pq = pauli_mul(p, &q)?;
            for (ap2, p2) in &d.terms {
                let prod = pauli_mul(&pq, p2)?;
                *acc.entry(prod.site(0)).or_default() += ap.conj() * ap2 * prod.phase().to_complex();
            }
        }
        *slot = acc.into_iter().filter(|(_, c)| c.norm() >= DECOMPOSITION_CUTOFF).collect();
    }
    Ok(out)
}

fn step_for(g: &Gate) -> Result<Step> {
    if g.is_clifford() {
        return Ok(Step::Clifford);
    }
    match g.kind.matrix1() {
        Some(u) => Ok(Step::Expand(Box::new(expansion(&u)?))),
        None => Err(Error::Precondition(format!("two-qubit non-Clifford gate {}", g.kind.name()))),
    }
}

impl<'a> FastEvaluator<'a> {
    pub fn new(e: &'a EnsembleSpec, cfg: FastConfig) -> Result<Self> {
        e.validate()?;
        e.require(EnsembleKind::CliffordPerfectT)?;
        if e.r() > cfg.max_measured {
            return Err(Error::CapExceeded { what: "measured wires", value: e.r(), cap: cfg.max_measured });
        }
        let c = &e.circuit;
        Ok(FastEvaluator {
            e,
            cfg,
            by_pos: c.sites_by_position(),
            gate_steps: c.gates.iter().map(step_for).collect::<Result<_>>()?,
            rotation_steps: c.pre_measure_rotations.iter().map(step_for).collect::<Result<_>>()?,
        })
    }

    pub fn ensemble(&self) -> &EnsembleSpec {
        self.e
    }

    pub fn config(&self) -> FastConfig {
        self.cfg
    }

    fn apply_inverse(&self, terms: Terms, g: &Gate, step: &Step) -> Result<Terms> {
        let mut out = Terms::new();
        match step {
            Step::Clifford => {
                for ((x, z), c) in terms {
                    let mut p = PauliString::new(x, z, Phase::ONE)?;
                    conjugate_inverse_in_place(&mut p, g)?;
                    let ph = p.phase().to_complex();
                    out.insert((p.xbits, p.zbits), c * ph);
                }
            }
            Step::Expand(table) => {
                let w = g.targets[0];
                for ((x, z), c) in terms {
                    let (a, b) = (x.bit(w), z.bit(w));
                    if !a && !b {
                        // U† I U = I
                        *out.entry((x, z)).or_default() += c;
                        continue;
                    }
                    for &((a2, b2), gamma) in &table[a as usize | (b as usize) << 1] {
                        let (mut x2, mut z2) = (x.clone(), z.clone());
                        x2.put(w, a2);
                        z2.put(w, b2);
                        *out.entry((x2, z2)).or_default() += c * gamma;
                    }
                }
                out.retain(|_, c| c.norm() >= DECOMPOSITION_CUTOFF);
                if out.len() > self.cfg.max_live_terms {
                    return Err(Error::BudgetExceeded { live: out.len(), cap: self.cfg.max_live_terms });
                }
            }
        }
        Ok(out)
    }

    /// `⟨0| E_s†(P) |0⟩` and the number of terms evaluated at the vacuum.
    fn pull_back(&self, start: PauliString, s: &FourierIndex) -> Result<(C64, usize)> {
        let c = &self.e.circuit;
        let mut terms = Terms::new();
        let ph = start.phase().to_complex();
        terms.insert((start.xbits, start.zbits), ph);
        for (g, step) in c.pre_measure_rotations.iter().zip(&self.rotation_steps).rev() {
            terms = self.apply_inverse(terms, g, step)?;
        }
        for p in (0..c.gates.len()).rev() {
            for &k in self.by_pos[p].iter().rev() {
                let wire = c.twirl_sites[k].wire;
                let keep = s.site(k);
                terms.retain(|(x, z), _| (x.bit(wire), z.bit(wire)) == keep);
            }
            if terms.is_empty() {
                return Ok((C64::new(0.0, 0.0), 0));
            }
            terms = self.apply_inverse(terms, &c.gates[p], &self.gate_steps[p])?;
        }
        let mut acc = C64::new(0.0, 0.0);
        for ((x, z), coef) in &terms {
            let p = PauliString::new(x.clone(), z.clone(), Phase::ONE)?;
            acc += coef * vacuum_expectation(&p);
        }
        Ok((acc, terms.len()))
    }

    /// `⟨0| E_s†(Z_t) |0⟩` for every `t ∈ {0,1}^r`, indexed by `t`.
    fn z_strings(&self, s: &FourierIndex) -> Result<(Vec<f64>, usize)> {
        let c = &self.e.circuit;
        let r = c.r();
        let mut values = Vec::with_capacity(1 << r);
        let mut count = 0;
        for t in 0..1usize << r {
            let mut z = Bits::zeros(c.n);
            for (k, &w) in c.measured_wires.iter().enumerate() {
                z.put(w, (t >> k) & 1 == 1);
            }
            let (v, terms) = self.pull_back(PauliString::new(Bits::zeros(c.n), z, Phase::ONE)?, s)?;
            values.push(v.re);
            count += terms;
        }
        Ok((values, count))
    }

    /// `q̂_{x,s}` for every outcome `x` (indexed by its integer value), plus the
    /// number of vacuum evaluations.
    pub fn components_all_x(&self, s: &FourierIndex) -> Result<(Vec<f64>, usize)> {
        self.e.check_sizes(None, Some(s), None)?;
        let r = self.e.r();
        let (v, count) = self.z_strings(s)?;
        let scale = 0.5f64.powi((self.e.m() + r) as i32);
        let out = (0..1usize << r)
            .map(|x| {
                let mut acc = 0.0;
                for (t, vt) in v.iter().enumerate() {
                    acc += if (x & t).count_ones() % 2 == 1 { -vt } else { *vt };
                }
                acc * scale
            })
            .collect();
        Ok((out, count))
    }

    /// `q̂_{x,s}` and the number of vacuum evaluations.
    pub fn component(&self, x: &Bits, s: &FourierIndex) -> Result<(f64, usize)> {
        self.e.check_sizes(Some(x), Some(s), None)?;
        let (all, count) = self.components_all_x(s)?;
        Ok((all[x.index()], count))
    }
}
