use rayon::prelude::*;

use super::{enumerate_low_weight, low_weight_count, EnsembleSpec, FastConfig, FastEvaluator, TermBudget};
use crate::bits::{binary_dot, Bits};
use crate::error::{Error, Result};
use crate::fourier::{decay_factor, FourierIndex, KahanSum, SpectrumTable};

/// Decayed low-weight components `decay(s) · q̂_{x,s}` for every `|s| < l`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    m: usize,
    r: usize,
    l: usize,
    /// In enumeration order; each vector is indexed by the outcome integer.
    terms: Vec<(FourierIndex, Vec<f64>)>,
    budget: TermBudget,
}

impl TruncatedSeries {
    pub fn build(ev: &FastEvaluator<'_>, l: usize) -> Result<Self> {
        let e = ev.ensemble();
        let (m, r) = (e.m(), e.r());
        let count = low_weight_count(m, l);
        let cap = ev.config().max_indices;
        if count > cap as u128 {
            return Err(Error::BudgetExceeded { live: count.min(usize::MAX as u128) as usize, cap });
        }
        let indices: Vec<FourierIndex> = enumerate_low_weight(m, l).collect();
        let evaluated = indices
            .par_iter()
            .map(|s| ev.components_all_x(s))
            .collect::<Result<Vec<_>>>()?;
        let mut budget = TermBudget::new(m, l);
        budget.enumerated = indices.len();
        let mut terms = Vec::with_capacity(indices.len());
        for (s, (values, used)) in indices.into_iter().zip(evaluated) {
            budget.pauli_terms += used;
            let k = decay_factor(&s, &e.noise);
            terms.push((s, values.into_iter().map(|v| v * k).collect()));
        }
        Ok(TruncatedSeries { m, r, l, terms, budget })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn budget(&self) -> TermBudget {
        self.budget
    }

    pub fn terms(&self) -> &[(FourierIndex, Vec<f64>)] {
        &self.terms
    }

    /// Pseudo probabilities `p'_{x|y} = 2^m Σ_{|s|<l} (−1)^{s·y} decay(s) q̂_{x,s}` for all `x`.
    pub fn evaluate(&self, y: &Bits) -> Result<Vec<f64>> {
        if y.len() != 2 * self.m {
            return Err(Error::SizeMismatch(format!("twirl string of {} bits for m = {}", y.len(), self.m)));
        }
        let mut acc = vec![KahanSum::default(); 1 << self.r];
        for (s, values) in &self.terms {
            let neg = binary_dot(&s.combined(), y)?;
            for (a, v) in acc.iter_mut().zip(values) {
                a.add(if neg { -v } else { *v });
            }
        }
        let scale = 2f64.powi(self.m as i32);
        Ok(acc.into_iter().map(|a| a.value() * scale).collect())
    }

    /// The truncated noisy spectrum as a table.
    pub fn spectrum(&self) -> SpectrumTable {
        let mut out = SpectrumTable::new(self.m, self.r);
        for (s, values) in &self.terms {
            for (xi, v) in values.iter().enumerate() {
                out.insert(Bits::from_u64(xi as u64, self.r), s.clone(), *v).expect("finite, well-sized");
            }
        }
        out
    }
}

/// `p'_{x|y}` at weight cutoff `l`, with the work spent.
pub fn approximate_output(e: &EnsembleSpec, y: &Bits, x: &Bits, l: usize) -> Result<(f64, TermBudget)> {
    e.check_sizes(Some(x), None, Some(y))?;
    let (dist, budget) = approximate_distribution(e, y, l)?;
    Ok((dist[x.index()], budget))
}

/// `p'_{·|y}` over all outcomes.
pub fn approximate_distribution(e: &EnsembleSpec, y: &Bits, l: usize) -> Result<(Vec<f64>, TermBudget)> {
    e.check_sizes(None, None, Some(y))?;
    let ev = FastEvaluator::new(e, FastConfig::default())?;
    let series = TruncatedSeries::build(&ev, l)?;
    Ok((series.evaluate(y)?, series.budget()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitSpec, Gate, GateKind, NoiseParams, TwirlSite};
    use crate::fast::EnsembleKind;
    use crate::oracle::{all_y, output_distribution_noisy, OracleCaps};

    fn instance(noise: NoiseParams) -> EnsembleSpec {
        let gates = vec![
            Gate::one(GateKind::H, 0).unwrap(),
            Gate::one(GateKind::T, 0).unwrap(),
            Gate::two(GateKind::Cnot, 0, 1).unwrap(),
            Gate::one(GateKind::H, 0).unwrap(),
            Gate::one(GateKind::T, 0).unwrap(),
            Gate::one(GateKind::H, 1).unwrap(),
        ];
        let sites = vec![TwirlSite { id: 0, wire: 0, position: 1 }, TwirlSite { id: 1, wire: 0, position: 4 }];
        let c = CircuitSpec::new(2, gates, sites, vec![0, 1], vec![]).unwrap();
        EnsembleSpec::new(EnsembleKind::CliffordPerfectT, c, noise).unwrap()
    }

    #[test]
    fn zero_cutoff_gives_zero() {
        let e = instance(NoiseParams::symmetric(0.1).unwrap());
        let (v, b) = approximate_output(&e, &Bits::zeros(4), &Bits::zeros(2), 0).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(b.enumerated, 0);
    }

    #[test]
    fn full_cutoff_is_exact() {
        let np = NoiseParams::new(0.1, 0.05, 0.02).unwrap();
        let e = instance(np);
        let ev = FastEvaluator::new(&e, FastConfig::default()).unwrap();
        let series = TruncatedSeries::build(&ev, 2 * e.m() + 1).unwrap();
        for y in all_y(e.m()) {
            let want = output_distribution_noisy(&e.circuit, &y, &np, &OracleCaps::default()).unwrap();
            let got = series.evaluate(&y).unwrap();
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9);
            }
        }
        let b = series.budget();
        assert_eq!(b.enumerated, 16);
        assert!(b.pauli_terms as f64 <= b.term_cap(e.r()));
    }

    #[test]
    fn index_cap_is_enforced() {
        let e = instance(NoiseParams::noiseless());
        let cfg = FastConfig { max_indices: 3, ..FastConfig::default() };
        let ev = FastEvaluator::new(&e, cfg).unwrap();
        assert!(matches!(TruncatedSeries::build(&ev, 2), Err(Error::BudgetExceeded { .. })));
    }
}
