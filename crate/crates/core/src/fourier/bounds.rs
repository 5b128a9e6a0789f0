use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::oracle::JointTable;

/// Conditional distributions `y ↦ (x ↦ p_{x|y})` over a set of twirl strings.
///
/// Rows may be pseudo probabilities (negative entries allowed).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConditionalTable {
    r: usize,
    rows: BTreeMap<Bits, Vec<f64>>,
}

impl ConditionalTable {
    pub fn new(r: usize) -> Self {
        ConditionalTable { r, rows: BTreeMap::new() }
    }

    /// Every `y` of a complete joint table.
    pub fn from_joint(t: &JointTable) -> Self {
        let mut out = ConditionalTable::new(t.r());
        for yi in 0..1usize << (2 * t.m()) {
            out.rows.insert(Bits::from_u64(yi as u64, 2 * t.m()), t.conditional(yi));
        }
        out
    }

    pub fn insert(&mut self, y: Bits, row: Vec<f64>) -> Result<()> {
        if row.len() != 1 << self.r {
            return Err(Error::SizeMismatch(format!("row of {} entries for r = {}", row.len(), self.r)));
        }
        if let Some((first, _)) = self.rows.iter().next() {
            if first.len() != y.len() {
                return Err(Error::SizeMismatch("twirl strings of differing lengths".into()));
            }
        }
        self.rows.insert(y, row);
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, y: &Bits) -> Option<&[f64]> {
        self.rows.get(y).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bits, &[f64])> {
        self.rows.iter().map(|(y, row)| (y, row.as_slice()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    /// Mean of `δ_y` over the stored twirl strings.
    pub delta0: f64,
    /// Population standard deviation of `δ_y`.
    pub big_delta: f64,
    pub per_y: BTreeMap<Bits, f64>,
    /// Constant in front of the truncation bound.
    pub c: f64,
}

impl ErrorStats {
    /// Replaces `c = √(2^r)` by `√α` for an anti-concentrated ensemble.
    pub fn with_anti_concentration(mut self, alpha: f64) -> Self {
        self.c = alpha.sqrt();
        self
    }

    /// `δ₀ ≤ c e^{−2εl}` and `Δ ≤ c e^{−2εl}`.
    pub fn within_truncation_bound(&self, eps: f64, l: usize) -> bool {
        let b = truncation_bound(self.c, eps, l);
        self.delta0 <= b && self.big_delta <= b
    }

    /// Fraction of stored `y` with `δ_y > δ`.
    pub fn fraction_above(&self, delta: f64) -> f64 {
        if self.per_y.is_empty() {
            return 0.0;
        }
        self.per_y.values().filter(|&&d| d > delta).count() as f64 / self.per_y.len() as f64
    }
}

/// `c · e^{−2εl}`.
pub fn truncation_bound(c: f64, eps: f64, l: usize) -> f64 {
    c * (-2.0 * eps * l as f64).exp()
}

/// Exact `δ_y = Σ_x |p_{x|y} − q_{x|y}|`, their mean `δ₀` and standard deviation `Δ`.
pub fn error_statistics(p: &ConditionalTable, q: &ConditionalTable) -> Result<ErrorStats> {
    if p.r != q.r || p.rows.len() != q.rows.len() || p.rows.keys().zip(q.rows.keys()).any(|(a, b)| a != b) {
        return Err(Error::SizeMismatch("conditional tables cover different (x, y) domains".into()));
    }
    let per_y: BTreeMap<Bits, f64> = p
        .rows
        .iter()
        .zip(q.rows.values())
        .map(|((y, a), b)| (y.clone(), a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()))
        .collect();
    let count = per_y.len().max(1) as f64;
    let delta0 = per_y.values().sum::<f64>() / count;
    let var = per_y.values().map(|d| (d - delta0).powi(2)).sum::<f64>() / count;
    Ok(ErrorStats { delta0, big_delta: var.sqrt(), per_y, c: 2f64.powi(p.r as i32).sqrt() })
}

/// Chebyshev bound `Δ² / (δ − δ₀)²` on the fraction of `y` with `δ_y > δ`, clamped to `[0, 1]`.
pub fn chebyshev_fraction(delta0: f64, big_delta: f64, delta: f64) -> Result<f64> {
    if delta.is_nan() || delta <= delta0 {
        return Err(Error::UnusablePrecision { delta, delta0 });
    }
    Ok((big_delta * big_delta / (delta - delta0).powi(2)).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChooseL {
    /// Smallest `l` with `2^r (1 + 1/√η) e^{−2εl} ≤ δ`.
    pub l: usize,
    /// `ln(2^r δ^{−1} (1 + 1/√η)) / 2ε` before rounding.
    pub closed_form: f64,
    /// Smallest `l` with `√(2^r) (1 + 1/√η) e^{−2εl} ≤ δ`.
    pub l_tight: usize,
}

fn smallest_l(c: f64, eps: f64, delta: f64, eta: f64) -> usize {
    let k = c * (1.0 + 1.0 / eta.sqrt());
    if k <= delta {
        return 0;
    }
    let mut l = ((k / delta).ln() / (2.0 * eps)).ceil().max(0.0) as usize;
    // guard the rounding at the boundary against floating error
    while l > 0 && k * (-2.0 * eps * (l - 1) as f64).exp() <= delta {
        l -= 1;
    }
    while k * (-2.0 * eps * l as f64).exp() > delta {
        l += 1;
    }
    l
}

/// Truncation weight needed for precision `δ` on all but a fraction `η` of twirl strings.
pub fn choose_l(eps: f64, delta: f64, eta: f64, r: usize) -> Result<ChooseL> {
    for (name, v) in [("epsilon", eps), ("delta", delta), ("eta", eta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
        }
    }
    if eps >= 0.5 {
        return Err(Error::InvalidParameter(format!("epsilon = {eps} must be below 0.5")));
    }
    let big = 2f64.powi(r as i32);
    let closed_form = (big / delta * (1.0 + 1.0 / eta.sqrt())).ln() / (2.0 * eps);
    Ok(ChooseL {
        l: smallest_l(big, eps, delta, eta),
        closed_form: closed_form.max(0.0),
        l_tight: smallest_l(big.sqrt(), eps, delta, eta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_table(m: usize, r: usize) -> ConditionalTable {
        let mut t = ConditionalTable::new(r);
        for yi in 0..1u64 << (2 * m) {
            t.insert(Bits::from_u64(yi, 2 * m), vec![1.0 / (1 << r) as f64; 1 << r]).unwrap();
        }
        t
    }

    #[test]
    fn identical_tables_have_zero_error() {
        let t = uniform_table(2, 1);
        let s = error_statistics(&t, &t).unwrap();
        assert_eq!((s.delta0, s.big_delta), (0.0, 0.0));
        assert!((s.c - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_point_statistics() {
        let (m, v) = (2, 0.3);
        let q = uniform_table(m, 1);
        let mut p = q.clone();
        let y = Bits::from_u64(5, 2 * m);
        let mut row = p.get(&y).unwrap().to_vec();
        row[1] += v;
        p.insert(y, row).unwrap();
        let s = error_statistics(&p, &q).unwrap();
        let n = 2f64.powi(-2 * m as i32);
        assert!((s.delta0 - v * n).abs() < 1e-15);
        assert!((s.big_delta - v * (n - n * n).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        assert!(error_statistics(&uniform_table(1, 1), &uniform_table(2, 1)).is_err());
        assert!(error_statistics(&uniform_table(1, 1), &uniform_table(1, 2)).is_err());
    }

    #[test]
    fn chebyshev_examples() {
        assert!((chebyshev_fraction(0.0, 0.01, 0.1).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(chebyshev_fraction(0.02, 0.0, 0.1).unwrap(), 0.0);
        assert_eq!(chebyshev_fraction(0.1, 0.05, 0.1 + 1e-9).unwrap(), 1.0);
        assert!(matches!(chebyshev_fraction(0.1, 0.0, 0.1), Err(Error::UnusablePrecision { .. })));
    }

    #[test]
    fn choose_l_examples() {
        let c = choose_l(0.1, 0.01, 0.01, 1).unwrap();
        assert!((c.closed_form - (2200f64).ln() / 0.2).abs() < 1e-12);
        assert_eq!(c.l, 39);
        assert_eq!(c.l_tight, 37);
        // δ at or above the prefactor needs no Fourier terms at all
        assert_eq!(choose_l(0.1, 2.0 * 11.0, 0.01, 1).unwrap().l, 0);
        let a = choose_l(0.1, 0.01, 0.01, 2).unwrap().closed_form;
        let b = choose_l(0.1, 0.005, 0.01, 2).unwrap().closed_form;
        assert!((b - a - 2f64.ln() / 0.2).abs() < 1e-12);
        assert!(choose_l(0.5, 0.01, 0.01, 1).is_err());
        assert!(choose_l(0.1, 0.0, 0.01, 1).is_err());
    }

    #[test]
    fn choose_l_is_minimal() {
        for (eps, delta, eta, r) in [(0.1, 0.01, 0.01, 1), (0.05, 0.2, 0.5, 3), (0.3, 1e-4, 0.1, 0)] {
            let c = choose_l(eps, delta, eta, r).unwrap();
            let k = 2f64.powi(r as i32) * (1.0 + 1.0 / f64::sqrt(eta));
            assert!(k * (-2.0 * eps * c.l as f64).exp() <= delta);
            assert!(c.l == 0 || k * (-2.0 * eps * (c.l - 1) as f64).exp() > delta);
            assert!((c.l as f64 - c.closed_form).abs() <= 1.0);
        }
    }
}
