use crate::bits::Bits;
use crate::fourier::FourierIndex;

/// Every `s` with `|s1| + |s2| < l`, by weight and then lexicographically in
/// the positions of the set bits of `s1 s2`.
#[derive(Clone, Debug)]
pub struct LowWeight {
    m: usize,
    limit: usize,
    weight: usize,
    positions: Vec<usize>,
}

impl Iterator for LowWeight {
    type Item = FourierIndex;

    fn next(&mut self) -> Option<FourierIndex> {
        if self.weight >= self.limit {
            return None;
        }
        let mut s = Bits::zeros(2 * self.m);
        for &p in &self.positions {
            s.put(p, true);
        }
        self.advance();
        Some(FourierIndex::from_combined(&s).expect("even length"))
    }
}

impl LowWeight {
    fn advance(&mut self) {
        let n = 2 * self.m;
        let k = self.weight;
        // rightmost position that can still move right
        if let Some(i) = (0..k).rev().find(|&i| self.positions[i] < n - k + i) {
            self.positions[i] += 1;
            for j in i + 1..k {
                self.positions[j] = self.positions[j - 1] + 1;
            }
        } else {
            self.weight += 1;
            self.positions = (0..self.weight).collect();
        }
    }
}

pub fn enumerate_low_weight(m: usize, l: usize) -> LowWeight {
    LowWeight { m, limit: l.min(2 * m + 1), weight: 0, positions: Vec::new() }
}

/// `Σ_{k<l} C(2m, k)`, saturating.
pub fn low_weight_count(m: usize, l: usize) -> u128 {
    let n = 2 * m as u128;
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 0..l.min(2 * m + 1) as u128 {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul(n - k) / (k + 1);
    }
    total
}
