//! Fixed-length bit strings.
//!
//! Bit `i` of a string is printed as the `i`-th character from the left, so
//! `"10"` has bit 0 set. The same convention is used for measured outcomes
//! (bit `k` is the result on the `k`-th measured wire) and for the twirl
//! variables `y = y1 y2`, which occupy bits `0..m` and `m..2m` respectively.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 2]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits {
    len: usize,
    words: Words,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, words: smallvec![0; word_count(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for w in b.words.iter_mut() {
            *w = u64::MAX;
        }
        b.mask_tail();
        b
    }

    /// Low `len` bits of `value`, bit `i` of the string being bit `i` of the integer.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let mut b = Bits::zeros(len);
        if len > 0 {
            b.words[0] = value;
            b.mask_tail();
        }
        b
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = Bits::zeros(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            if v {
                b.words[i / 64] |= 1 << (i % 64);
            }
        }
        b
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Checked access.
    pub fn get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.bit(i))
    }

    /// Unchecked-by-contract access; panics when `i` is out of range.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) -> Result<()> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        self.put(i, value);
        Ok(())
    }

    #[inline]
    pub(crate) fn put(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions where both strings are 1. Lengths must agree.
    pub(crate) fn and_weight(&self, other: &Bits) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor(&self, other: &Bits) -> Result<Bits> {
        check_len(self, other)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    #[inline]
    pub(crate) fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &Bits) -> Bits {
        let mut out = Bits::zeros(self.len + tail.len);
        for i in self.ones_iter() {
            out.put(i, true);
        }
        for i in tail.ones_iter() {
            out.put(self.len + i, true);
        }
        out
    }

    /// Bits `start..end` as a new string.
    pub fn slice(&self, start: usize, end: usize) -> Result<Bits> {
        if start > end || end > self.len {
            return Err(Error::OutOfRange { index: end, len: self.len });
        }
        let mut out = Bits::zeros(end - start);
        for i in start..end {
            if self.bit(i) {
                out.put(i - start, true);
            }
        }
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    /// Indices of set bits in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Integer value, bit `i` of the string being bit `i` of the result.
    pub fn to_u64(&self) -> Result<u64> {
        if self.len > 64 {
            return Err(Error::InvalidParameter(format!(
                "bit string of length {} does not fit in 64 bits",
                self.len
            )));
        }
        Ok(self.words.first().copied().unwrap_or(0))
    }

    /// Integer value as an array index; caller guarantees `len <= 64`.
    #[inline]
    pub(crate) fn index(&self) -> usize {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0) as usize
    }
}

fn check_len(a: &Bits, b: &Bits) -> Result<()> {
    if a.len != b.len {
        return Err(Error::SizeMismatch(format!(
            "bit strings of length {} and {}",
            a.len, b.len
        )));
    }
    Ok(())
}

/// GF(2) inner product `⊕_j s_j y_j`.
pub fn binary_dot(s: &Bits, y: &Bits) -> Result<bool> {
    check_len(s, y)?;
    Ok(s.and_weight(y) % 2 == 1)
}

pub fn hamming_weight(s: &Bits) -> usize {
    s.weight()
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(\"{self}\")")
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Bits::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.put(i, true),
                other => {
                    return Err(Error::Parse(format!("invalid bit character {other:?} in {s:?}")))
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
