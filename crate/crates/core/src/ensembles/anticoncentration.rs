use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_fig1a, random_clifford_word, sample_y, GeneratorConfig};
use crate::error::{Error, Result};
use crate::oracle::{final_state, DenseState, OracleCaps};
use crate::rng::{mix, CounterRng};

/// Noiseless ensembles the estimator can sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "ensemble")]
pub enum AcEnsemble {
    /// Fresh brickwork instance and twirl string per sample.
    Fig1a(GeneratorConfig),
    /// Uniform `{H, S, CNOT}` words of fixed length.
    CliffordWords { n: usize, length: usize },
    /// The empty circuit.
    Identity { n: usize },
}

impl AcEnsemble {
    pub fn n(&self) -> usize {
        match self {
            AcEnsemble::Fig1a(cfg) => cfg.n,
            AcEnsemble::CliffordWords { n, .. } | AcEnsemble::Identity { n } => *n,
        }
    }

    fn collision(&self, i: u64, seed: u64, caps: &OracleCaps) -> Result<f64> {
        let n = self.n();
        let all: Vec<usize> = (0..n).collect();
        let probs = match self {
            AcEnsemble::Fig1a(cfg) => {
                let cfg = GeneratorConfig { seed: mix(seed, 2 * i), ..cfg.clone() };
                let e = build_fig1a(&cfg)?;
                let y = sample_y(e.m(), 1, mix(seed, 2 * i + 1)).remove(0);
                final_state(&e.circuit, &y, caps)?.marginal(&all)
            }
            AcEnsemble::CliffordWords { length, .. } => {
                let mut rng = CounterRng::substream(seed, i);
                let mut psi = DenseState::zero(n);
                for g in random_clifford_word(n, *length, &mut rng)? {
                    psi.apply_gate(&g);
                }
                psi.marginal(&all)
            }
            AcEnsemble::Identity { .. } => DenseState::zero(n).marginal(&all),
        };
        Ok(2f64.powi(n as i32) * probs.iter().map(|p| p * p).sum::<f64>())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiConcentrationReport {
    pub n: usize,
    pub samples: usize,
    /// Monte-Carlo mean of `2^n Σ_x p_x²`.
    pub estimate: f64,
    pub std_error: f64,
    pub alpha_threshold: Option<f64>,
    /// `estimate ≤ α` when a threshold is given.
    pub anti_concentrated: Option<bool>,
}

/// Estimates `2^n E[Σ_x p_x²]` over the noiseless ensemble.
pub fn anti_concentration_estimate(
    ensemble: &AcEnsemble,
    samples: usize,
    seed: u64,
    alpha_threshold: Option<f64>,
    caps: &OracleCaps,
) -> Result<AntiConcentrationReport> {
    let n = ensemble.n();
    if n > caps.statevector_qubits {
        return Err(Error::CapExceeded { what: "qubit count (statevector)", value: n, cap: caps.statevector_qubits });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|i| ensemble.collision(i, seed, caps))
        .collect::<Result<Vec<f64>>>()?;
    let count = values.len() as f64;
    let estimate = values.iter().sum::<f64>() / count;
    let std_error = if values.len() > 1 {
        (values.iter().map(|v| (v - estimate).powi(2)).sum::<f64>() / (count - 1.0) / count).sqrt()
    } else {
        0.0
    };
    Ok(AntiConcentrationReport {
        n,
        samples,
        estimate,
        std_error,
        alpha_threshold,
        anti_concentrated: alpha_threshold.map(|a| estimate <= a),
    })
}
