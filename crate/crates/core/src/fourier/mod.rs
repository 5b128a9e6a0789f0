//! Binary Fourier analysis over the twirl variables.
//!
//! Both directions carry the same `2^{-m}` factor over the `2m`-bit strings:
//!
//! ```text
//! q̂_{x,s} = 2^{-m} Σ_y (−1)^{s·y} q_{x,y}        q_{x,y} = 2^{-m} Σ_s (−1)^{s·y} q̂_{x,s}
//! ```
//!
//! With this normalisation Parseval reads `Σ_s q̂² = Σ_y q²` with no extra factor.

mod bounds;
mod export;

use std::collections::BTreeMap;

pub use bounds::{
    chebyshev_fraction, choose_l, error_statistics, truncation_bound, ChooseL, ConditionalTable, ErrorStats,
};
pub use export::{read_spectrum_jsonl, write_spectrum_jsonl, SpectrumRecord};

use crate::bits::{binary_dot, Bits};
use crate::circuit::NoiseParams;
use crate::error::{Error, Result};
use crate::oracle::JointTable;

/// Dual index `s = s1 s2` of a twirl string `y = y1 y2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FourierIndex {
    pub s1: Bits,
    pub s2: Bits,
}

impl FourierIndex {
    pub fn zero(m: usize) -> Self {
        FourierIndex { s1: Bits::zeros(m), s2: Bits::zeros(m) }
    }

    pub fn new(s1: Bits, s2: Bits) -> Result<Self> {
        if s1.len() != s2.len() {
            return Err(Error::SizeMismatch(format!("s1 has {} bits, s2 has {}", s1.len(), s2.len())));
        }
        Ok(FourierIndex { s1, s2 })
    }

    /// Splits a `2m`-bit string into its two halves.
    pub fn from_combined(s: &Bits) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::SizeMismatch(format!("combined index has odd length {}", s.len())));
        }
        let m = s.len() / 2;
        Ok(FourierIndex { s1: s.slice(0, m)?, s2: s.slice(m, 2 * m)? })
    }

    pub fn from_index(index: usize, m: usize) -> Self {
        let mask = (1u64 << m) - 1;
        FourierIndex {
            s1: Bits::from_u64(index as u64 & mask, m),
            s2: Bits::from_u64((index as u64 >> m) & mask, m),
        }
    }

    pub fn combined(&self) -> Bits {
        self.s1.concat(&self.s2)
    }

    pub fn m(&self) -> usize {
        self.s1.len()
    }

    /// `|s1| + |s2|`.
    pub fn weight(&self) -> usize {
        self.s1.weight() + self.s2.weight()
    }

    /// Dual bits `(a, b) = (s1[k], s2[k])` of site `k`.
    pub fn site(&self, k: usize) -> (bool, bool) {
        (self.s1.bit(k), self.s2.bit(k))
    }

    /// `(−1)^{s·y}` as `true` for −1.
    pub fn parity_with(&self, y: &Bits) -> Result<bool> {
        let m = self.m();
        if y.len() != 2 * m {
            return Err(Error::SizeMismatch(format!("twirl string of {} bits for m = {m}", y.len())));
        }
        Ok((self.s1.and_weight(&y.slice(0, m)?) + self.s2.and_weight(&y.slice(m, 2 * m)?)) % 2 == 1)
    }

    /// Inverse of [`FourierIndex::from_index`].
    pub fn index(&self) -> usize {
        self.s1.index() | (self.s2.index() << self.m())
    }
}

/// Sparse spectrum keyed by `(x, s)`; missing entries are exactly zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectrumTable {
    m: usize,
    r: usize,
    entries: BTreeMap<(Bits, FourierIndex), f64>,
}

impl SpectrumTable {
    pub fn new(m: usize, r: usize) -> Self {
        SpectrumTable { m, r, entries: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stores a coefficient; zero removes the entry.
    pub fn insert(&mut self, x: Bits, s: FourierIndex, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite spectrum value {value}")));
        }
        if x.len() != self.r || s.m() != self.m {
            return Err(Error::SizeMismatch(format!(
                "entry with |x| = {}, m = {} in a table with r = {}, m = {}",
                x.len(),
                s.m(),
                self.r,
                self.m
            )));
        }
        if value == 0.0 {
            self.entries.remove(&(x, s));
        } else {
            self.entries.insert((x, s), value);
        }
        Ok(())
    }

    pub fn get(&self, x: &Bits, s: &FourierIndex) -> f64 {
        self.entries.get(&(x.clone(), s.clone())).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bits, &FourierIndex, f64)> {
        self.entries.iter().map(|((x, s), v)| (x, s, *v))
    }

    /// Largest weight carrying a stored entry.
    pub fn max_weight(&self) -> Option<usize> {
        self.entries.keys().map(|(_, s)| s.weight()).max()
    }

    /// `Σ_s q̂_{x,s}²` per outcome index.
    pub fn energy_per_x(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.r];
        for ((x, _), v) in &self.entries {
            out[x.index()] += v * v;
        }
        out
    }
}

/// In-place unnormalised Walsh–Hadamard butterfly.
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, w) = (*a, *b);
                *a = u + w;
                *b = u - w;
            }
        }
        h *= 2;
    }
}

/// Full spectrum of a joint table, `q̂ = 2^{-m} Σ_y (−1)^{s·y} q`.
pub fn wht_forward(f: &JointTable) -> SpectrumTable {
    let (m, r) = (f.m(), f.r());
    let ny = 1usize << (2 * m);
    let scale = 0.5f64.powi(m as i32);
    let mut out = SpectrumTable::new(m, r);
    for xi in 0..1usize << r {
        let mut column: Vec<f64> = (0..ny).map(|yi| f.at(xi, yi)).collect();
        fwht(&mut column);
        let x = Bits::from_u64(xi as u64, r);
        for (si, v) in column.into_iter().enumerate() {
            let v = v * scale;
            if v != 0.0 {
                out.entries.insert((x.clone(), FourierIndex::from_index(si, m)), v);
            }
        }
    }
    out
}

/// Compensated summation.
#[derive(Default, Clone, Copy, Debug)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Pointwise inverse `2^{-m} Σ_s (−1)^{s·y} F_{x,s}` at one `y`, for every outcome.
pub fn wht_inverse(spectrum: &SpectrumTable, y: &Bits) -> Result<Vec<f64>> {
    let m = spectrum.m;
    if y.len() != 2 * m {
        return Err(Error::SizeMismatch(format!("twirl string of {} bits for m = {m}", y.len())));
    }
    let mut acc = vec![KahanSum::default(); 1 << spectrum.r];
    for ((x, s), v) in &spectrum.entries {
        let sign = if binary_dot(&s.combined(), y)? { -1.0 } else { 1.0 };
        acc[x.index()].add(sign * v);
    }
    let scale = 0.5f64.powi(m as i32);
    Ok(acc.into_iter().map(|k| k.value() * scale).collect())
}

fn check_rate(name: &str, e: f64) -> Result<()> {
    if !(0.0..0.5).contains(&e) {
        return Err(Error::InvalidParameter(format!("{name} = {e} is outside [0, 0.5)")));
    }
    Ok(())
}

/// Decay factor `(1−2e1)^{|s1|} (1−2e2)^{|s2|} (1−2e3)^{|s1⊕s2|}` of the noisy spectrum.
///
/// The last factor accounts for Y flips, which toggle both twirl bits of a site;
/// it is 1 for the two-channel model.
pub fn decay_factor(s: &FourierIndex, np: &NoiseParams) -> f64 {
    let both = s.s1.xor(&s.s2).map(|b| b.weight()).unwrap_or(0);
    (1.0 - 2.0 * np.e1).powi(s.s1.weight() as i32)
        * (1.0 - 2.0 * np.e2).powi(s.s2.weight() as i32)
        * (1.0 - 2.0 * np.e3).powi(both as i32)
}

/// Multiplies every entry by `(1−2e1)^{|s1|} (1−2e2)^{|s2|}`.
pub fn decay_apply(spectrum: &SpectrumTable, e1: f64, e2: f64) -> Result<SpectrumTable> {
    check_rate("e1", e1)?;
    check_rate("e2", e2)?;
    decay_apply_noise(spectrum, &NoiseParams { e1, e2, e3: 0.0 })
}

/// [`decay_apply`] for the full three-channel noise model.
pub fn decay_apply_noise(spectrum: &SpectrumTable, np: &NoiseParams) -> Result<SpectrumTable> {
    np.validate()?;
    let mut out = SpectrumTable::new(spectrum.m, spectrum.r);
    for ((x, s), v) in &spectrum.entries {
        let scaled = v * decay_factor(s, np);
        if scaled != 0.0 {
            out.entries.insert((x.clone(), s.clone()), scaled);
        }
    }
    Ok(out)
}

/// Keeps entries with `|s1| + |s2| < l`.
pub fn truncate_spectrum(spectrum: &SpectrumTable, l: usize) -> SpectrumTable {
    SpectrumTable {
        m: spectrum.m,
        r: spectrum.r,
        entries: spectrum
            .entries
            .iter()
            .filter(|((_, s), _)| s.weight() < l)
            .map(|(k, v)| (k.clone(), *v))
            .collect(),
    }
}

/// Pseudo probabilities `p'_{x|y} = 4^m · (inverse transform at y)`; may be negative.
pub fn reconstruct_pseudo(spectrum: &SpectrumTable, y: &Bits) -> Result<Vec<f64>> {
    let scale = 4f64.powi(spectrum.m as i32);
    Ok(wht_inverse(spectrum, y)?.into_iter().map(|v| v * scale).collect())
}

/// Largest `2m` accepted by [`reconstruct_pseudo_all`].
pub const DENSE_TWIRL_BITS: usize = 24;

/// [`reconstruct_pseudo`] at every `y`, through one dense butterfly per outcome.
pub fn reconstruct_pseudo_all(spectrum: &SpectrumTable) -> Result<ConditionalTable> {
    let (m, r) = (spectrum.m, spectrum.r);
    if 2 * m > DENSE_TWIRL_BITS {
        return Err(Error::CapExceeded { what: "twirl bit count 2m (dense inverse)", value: 2 * m, cap: DENSE_TWIRL_BITS });
    }
    let mut columns = vec![vec![0.0; 1 << (2 * m)]; 1 << r];
    for ((x, s), v) in &spectrum.entries {
        columns[x.index()][s.index()] = *v;
    }
    let scale = 2f64.powi(m as i32);
    for col in &mut columns {
        fwht(col);
    }
    let mut out = ConditionalTable::new(r);
    for yi in 0..1usize << (2 * m) {
        out.insert(Bits::from_u64(yi as u64, 2 * m), columns.iter().map(|c| c[yi] * scale).collect())?;
    }
    Ok(out)
}

/// Presentation helper: clips negatives to zero and renormalises.
///
/// The error analysis is always done on the unclipped values.
pub fn clip_and_renormalize(pseudo: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = pseudo.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total > 0.0 {
        clipped.into_iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / pseudo.len() as f64; pseudo.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table_from_fn(m: usize, r: usize, mut f: impl FnMut(usize, usize) -> f64) -> JointTable {
        let mut values = vec![0.0; 1 << (2 * m + r)];
        for yi in 0..1 << (2 * m) {
            for xi in 0..1 << r {
                values[(yi << r) | xi] = f(xi, yi);
            }
        }
        JointTable::from_values(m, r, values).unwrap()
    }

    /// Straight double loop over `(s, y)`.
    fn direct_forward(f: &JointTable) -> Vec<f64> {
        let (m, r) = (f.m(), f.r());
        let mut out = vec![0.0; 1 << (2 * m + r)];
        for si in 0..1usize << (2 * m) {
            for xi in 0..1usize << r {
                let mut acc = 0.0;
                for yi in 0..1usize << (2 * m) {
                    let sign = if (si & yi).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                    acc += sign * f.at(xi, yi);
                }
                out[(si << r) | xi] = acc / 2f64.powi(m as i32);
            }
        }
        out
    }

    fn lcg_table(m: usize, r: usize, seed: u64) -> JointTable {
        let mut state = seed;
        table_from_fn(m, r, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        })
    }

    #[test]
    fn index_round_trip() {
        for si in 0..64 {
            let s = FourierIndex::from_index(si, 3);
            assert_eq!(s.index(), si);
            assert_eq!(FourierIndex::from_combined(&s.combined()).unwrap(), s);
        }
    }

    #[test]
    fn constant_in_y_lives_at_zero() {
        let g = [0.3, 0.7];
        let f = table_from_fn(1, 1, |x, _| g[x] * 0.25);
        let spec = wht_forward(&f);
        assert_eq!(spec.len(), 2);
        for (xi, gx) in g.iter().enumerate() {
            let x = Bits::from_u64(xi as u64, 1);
            assert!((spec.get(&x, &FourierIndex::zero(1)) - 0.5 * gx).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_in_y_is_flat() {
        let g = [0.3, 0.7];
        let f = table_from_fn(1, 1, |x, y| if y == 0 { g[x] } else { 0.0 });
        let spec = wht_forward(&f);
        for si in 0..4 {
            for (xi, gx) in g.iter().enumerate() {
                let v = spec.get(&Bits::from_u64(xi as u64, 1), &FourierIndex::from_index(si, 1));
                assert!((v - 0.5 * gx).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn forward_matches_direct_sum() {
        let f = lcg_table(3, 2, 9);
        let direct = direct_forward(&f);
        let spec = wht_forward(&f);
        for si in 0..64 {
            for xi in 0..4 {
                let v = spec.get(&Bits::from_u64(xi as u64, 2), &FourierIndex::from_index(si, 3));
                assert!((v - direct[(si << 2) | xi]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let empty = SpectrumTable::new(2, 1);
        assert_eq!(wht_inverse(&empty, &Bits::zeros(4)).unwrap(), vec![0.0, 0.0]);

        let mut single = SpectrumTable::new(2, 1);
        single.insert(Bits::zeros(1), FourierIndex::zero(2), 0.8).unwrap();
        for yi in 0..16 {
            let v = wht_inverse(&single, &Bits::from_u64(yi, 4)).unwrap();
            assert!((v[0] - 0.2).abs() < 1e-15 && v[1] == 0.0);
        }

        let f = lcg_table(3, 1, 4);
        let spec = wht_forward(&f);
        for yi in 0..64 {
            let v = wht_inverse(&spec, &Bits::from_u64(yi as u64, 6)).unwrap();
            for xi in 0..2 {
                assert!((v[xi] - f.at(xi, yi)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decay_examples() {
        let mut spec = SpectrumTable::new(3, 1);
        let s = FourierIndex::new("110".parse().unwrap(), "001".parse().unwrap()).unwrap();
        let x = Bits::zeros(1);
        spec.insert(x.clone(), s.clone(), 1.0).unwrap();
        assert_eq!(decay_apply(&spec, 0.0, 0.0).unwrap(), spec);
        let out = decay_apply(&spec, 0.1, 0.25).unwrap();
        assert!((out.get(&x, &s) - 0.32).abs() < 1e-15);
        assert!(decay_apply(&spec, 0.5, 0.0).is_err());
    }

    #[test]
    fn truncation_examples() {
        let mut spec = SpectrumTable::new(2, 0);
        for (si, v) in [(0b0000, 1.0), (0b0001, 2.0), (0b0011, 3.0), (0b0111, 4.0)] {
            spec.insert(Bits::zeros(0), FourierIndex::from_index(si, 2), v).unwrap();
        }
        assert!(truncate_spectrum(&spec, 0).is_empty());
        assert_eq!(truncate_spectrum(&spec, 5), spec);
        let kept = truncate_spectrum(&spec, 2);
        assert_eq!(kept.len(), 2);
        assert_eq!(kept.max_weight(), Some(1));
        assert!(reconstruct_pseudo(&truncate_spectrum(&spec, 0), &Bits::zeros(4)).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn clipping_renormalises() {
        let out = clip_and_renormalize(&[0.6, -0.1, 0.5]);
        assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(out[1], 0.0);
    }

    proptest! {
        #[test]
        fn parseval_holds(seed in any::<u64>(), m in 0usize..4, r in 0usize..3) {
            let f = lcg_table(m, r, seed);
            let energy = wht_forward(&f).energy_per_x();
            for xi in 0..1usize << r {
                let direct: f64 = (0..1usize << (2 * m)).map(|yi| f.at(xi, yi).powi(2)).sum();
                prop_assert!((energy[xi] - direct).abs() < 1e-12);
            }
        }

        #[test]
        fn forward_is_linear(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let f = lcg_table(2, 1, seed);
            let g = lcg_table(2, 1, seed ^ 0xdead_beef);
            let combo = table_from_fn(2, 1, |x, y| a * f.at(x, y) + b * g.at(x, y));
            let (sf, sg, sc) = (wht_forward(&f), wht_forward(&g), wht_forward(&combo));
            for si in 0..16 {
                for xi in 0..2 {
                    let x = Bits::from_u64(xi as u64, 1);
                    let s = FourierIndex::from_index(si, 2);
                    prop_assert!((sc.get(&x, &s) - a * sf.get(&x, &s) - b * sg.get(&x, &s)).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn truncation_support_is_monotone(seed in any::<u64>(), l in 0usize..6) {
            let spec = wht_forward(&lcg_table(2, 1, seed));
            let small = truncate_spectrum(&spec, l);
            let big = truncate_spectrum(&spec, l + 1);
            for (x, s, _) in small.iter() {
                prop_assert!(big.get(x, s) != 0.0);
            }
        }

        #[test]
        fn dense_inverse_matches_pointwise(seed in any::<u64>(), m in 0usize..4, r in 0usize..3, l in 0usize..8) {
            let spec = truncate_spectrum(&wht_forward(&lcg_table(m, r, seed)), l);
            let all = reconstruct_pseudo_all(&spec).unwrap();
            for yi in 0..1u64 << (2 * m) {
                let y = Bits::from_u64(yi, 2 * m);
                let row = all.get(&y).unwrap();
                for (a, b) in row.iter().zip(reconstruct_pseudo(&spec, &y).unwrap()) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }
}
