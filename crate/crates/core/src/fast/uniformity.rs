use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EnsembleKind, EnsembleSpec};
use crate::bits::Bits;
use crate::circuit::{depth_of, CircuitSpec};
use crate::ensembles::sample_y;
use crate::error::Result;
use crate::fourier::wht_forward;
use crate::oracle::{joint_table_pure, output_distribution_noisy, OracleCaps};

/// Components below this magnitude count as vanishing.
pub const VANISHING_TOL: f64 = 1e-12;

/// Layer `k` holds the `k`-th site of every wire, for `k < depth_of(c)`.
///
/// Each layer cuts every wire once, so an all-zero dual pattern on a layer
/// separates the circuit.
pub fn wire_layers(c: &CircuitSpec) -> Vec<Vec<usize>> {
    let per_wire = c.sites_by_wire();
    (0..depth_of(c)).map(|k| per_wire.iter().map(|sites| sites[k]).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub d: usize,
    pub layers: Vec<Vec<usize>>,
    /// Number of `(x, s)` pairs with `0 < |s| < d`.
    pub checked: usize,
    pub violations: usize,
    pub max_violation: f64,
    pub pass: bool,
}

/// Checks that every noiseless component with `0 < |s| < d` vanishes.
pub fn support_vanishing_check(e: &EnsembleSpec, caps: &OracleCaps) -> Result<SupportReport> {
    e.validate()?;
    e.require(EnsembleKind::AllNoisy)?;
    let d = depth_of(&e.circuit);
    let spectrum = wht_forward(&joint_table_pure(&e.circuit, caps)?);
    let (m, r) = (e.m(), e.r());
    let mut checked = 0;
    let mut violations = 0;
    let mut max_violation = 0.0f64;
    for si in 0..1usize << (2 * m) {
        let s = crate::fourier::FourierIndex::from_index(si, m);
        let w = s.weight();
        if w == 0 || w >= d {
            continue;
        }
        for xi in 0..1u64 << r {
            checked += 1;
            let v = spectrum.get(&Bits::from_u64(xi, r), &s).abs();
            max_violation = max_violation.max(v);
            if v >= VANISHING_TOL {
                violations += 1;
            }
        }
    }
    Ok(SupportReport { d, layers: wire_layers(&e.circuit), checked, violations, max_violation, pass: violations == 0 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Row {
    pub y: Bits,
    /// `Σ_x |q'_{x|y} − 2^{−r}|`.
    pub delta_y: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub d: usize,
    pub r: usize,
    pub epsilon: f64,
    /// `√(2^r) e^{−εd}`.
    pub threshold: f64,
    /// `e^{−2εd}`, the allowed fraction above threshold.
    pub allowed_fraction: f64,
    pub fraction_above: f64,
    /// Binomial standard deviation of the fraction at the allowed rate.
    pub sigma: f64,
    pub max_delta: f64,
    /// `fraction_above ≤ allowed_fraction + 3σ`.
    pub within_bound: bool,
    /// `εd = 0`: the uniformity statement says nothing.
    pub outside_theorem: bool,
    pub rows: Vec<Theorem1Row>,
}

/// Distance to uniform of the noisy output over sampled twirl strings.
pub fn theorem1_experiment(e: &EnsembleSpec, samples: usize, seed: u64, caps: &OracleCaps) -> Result<Theorem1Report> {
    e.validate()?;
    e.require(EnsembleKind::AllNoisy)?;
    let c = &e.circuit;
    let (d, r) = (depth_of(c), c.r());
    let epsilon = e.noise.epsilon();
    let threshold = 2f64.powi(r as i32).sqrt() * (-epsilon * d as f64).exp();
    let allowed_fraction = (-2.0 * epsilon * d as f64).exp();
    let uniform = 0.5f64.powi(r as i32);
    let ys = sample_y(e.m(), samples, seed);
    let rows = ys
        .into_par_iter()
        .map(|y| {
            let q = output_distribution_noisy(c, &y, &e.noise, caps)?;
            let delta_y: f64 = q.iter().map(|v| (v - uniform).abs()).sum();
            Ok(Theorem1Row { y, delta_y, pass: delta_y <= threshold })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len().max(1) as f64;
    let fraction_above = rows.iter().filter(|row| !row.pass).count() as f64 / n;
    let b = allowed_fraction.min(1.0);
    let sigma = (b * (1.0 - b) / n).sqrt();
    Ok(Theorem1Report {
        d,
        r,
        epsilon,
        threshold,
        allowed_fraction,
        fraction_above,
        sigma,
        max_delta: rows.iter().map(|row| row.delta_y).fold(0.0, f64::max),
        within_bound: fraction_above <= allowed_fraction + 3.0 * sigma,
        outside_theorem: epsilon * d as f64 == 0.0,
        rows,
    })
}
