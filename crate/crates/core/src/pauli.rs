//! Phased Pauli strings `i^k · ∏_j X^{x_j} Z^{z_j}`.
//!
//! Strings are kept in X-then-Z normal form on every qubit, so `Y` is the
//! phased string `i·XZ`. Products track the phase exactly as an exponent of
//! `i`; no floating point enters the group algebra.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// A power of `i`, stored mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }
}

impl Add<u32> for Phase {
    type Output = Phase;

    fn add(self, k: u32) -> Phase {
        Phase(((self.0 as u32 + k) % 4) as u8)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    pub(crate) xbits: Bits,
    pub(crate) zbits: Bits,
    pub(crate) phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { xbits: Bits::zeros(n), zbits: Bits::zeros(n), phase: Phase::ONE }
    }

    pub fn new(xbits: Bits, zbits: Bits, phase: Phase) -> Result<Self> {
        if xbits.len() != zbits.len() {
            return Err(Error::SizeMismatch(format!(
                "x part has {} qubits, z part has {}",
                xbits.len(),
                zbits.len()
            )));
        }
        Ok(PauliString { xbits, zbits, phase })
    }

    /// Hermitian single-site Pauli (`'I'`, `'X'`, `'Y'`, `'Z'`) per character,
    /// with an optional leading sign such as `"-iXYZ"`.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut phase, body) = if let Some(rest) = text.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = text.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = text.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = text.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = text.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, text)
        };
        let n = body.chars().count();
        let mut xbits = Bits::zeros(n);
        let mut zbits = Bits::zeros(n);
        for (j, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => xbits.put(j, true),
                'Z' => zbits.put(j, true),
                'Y' => {
                    xbits.put(j, true);
                    zbits.put(j, true);
                    phase = phase + 1;
                }
                other => return Err(Error::Parse(format!("invalid Pauli character {other:?}"))),
            }
        }
        Ok(PauliString { xbits, zbits, phase })
    }

    /// `X_j^a Z_j^b` on an `n`-qubit register, phase `+1`.
    pub fn single(n: usize, wire: usize, a: bool, b: bool) -> Result<Self> {
        if wire >= n {
            return Err(Error::OutOfRange { index: wire, len: n });
        }
        let mut p = PauliString::identity(n);
        p.xbits.put(wire, a);
        p.zbits.put(wire, b);
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.xbits.len()
    }

    pub fn xbits(&self) -> &Bits {
        &self.xbits
    }

    pub fn zbits(&self) -> &Bits {
        &self.zbits
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// `(x_j, z_j)` on one wire.
    #[inline]
    pub fn site(&self, wire: usize) -> (bool, bool) {
        (self.xbits.bit(wire), self.zbits.bit(wire))
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.xbits.is_zero() && self.zbits.is_zero()
    }

    /// Symplectic form: true when the two strings anticommute.
    pub fn anticommutes(&self, other: &PauliString) -> bool {
        (self.xbits.and_weight(&other.zbits) + self.zbits.and_weight(&other.xbits)) % 2 == 1
    }

    /// Phase that makes the string Hermitian: `i^{|x∧z|}` up to sign.
    pub(crate) fn y_count(&self) -> usize {
        self.xbits.and_weight(&self.zbits)
    }

    /// In-place right multiplication `self ← self · rhs`.
    pub(crate) fn mul_assign_right(&mut self, rhs: &PauliString) {
        // Z^{z1} X^{x2} = (-1)^{z1·x2} X^{x2} Z^{z1}
        let swaps = self.zbits.and_weight(&rhs.xbits) as u32;
        self.phase = self.phase * rhs.phase + 2 * swaps;
        self.xbits.xor_assign(&rhs.xbits);
        self.zbits.xor_assign(&rhs.zbits);
    }

    /// Dense `2^n × 2^n` matrix, row-major; qubit `j` is bit `j` of the basis index.
    pub fn to_dense(&self) -> Vec<C64> {
        let n = self.num_qubits();
        let dim = 1usize << n;
        let xmask = self.xbits.index();
        let zmask = self.zbits.index();
        let ph = self.phase.to_complex();
        let mut m = vec![C64::new(0.0, 0.0); dim * dim];
        // (X^x Z^z)|col> = (-1)^{z·col} |col ⊕ x>
        for col in 0..dim {
            let sign = if (col & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(col ^ xmask) * dim + col] = ph * sign;
        }
        m
    }
}

/// Group product `p · q` with exact phase.
pub fn pauli_mul(p: &PauliString, q: &PauliString) -> Result<PauliString> {
    if p.num_qubits() != q.num_qubits() {
        return Err(Error::SizeMismatch(format!(
            "Pauli strings on {} and {} qubits",
            p.num_qubits(),
            q.num_qubits()
        )));
    }
    let mut out = p.clone();
    out.mul_assign_right(q);
    Ok(out)
}

/// Single-qubit `σ_ab = X^a Z^b`, phase `+1`.
pub fn sigma_from_bits(a: bool, b: bool) -> PauliString {
    let mut p = PauliString::identity(1);
    p.xbits.put(0, a);
    p.zbits.put(0, b);
    p
}

impl fmt::Display for PauliString {
    /// Hermitian-letter form, e.g. `X·Z` prints as `-iY`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // X^1 Z^1 = -iY, so writing Y letters shifts the phase by -1 each.
        let shift = self.y_count() as u32 * 3;
        write!(f, "{}", self.phase + shift)?;
        for j in 0..self.num_qubits() {
            f.write_str(match self.site(j) {
                (false, false) => "I",
                (true, false) => "X",
                (false, true) => "Z",
                (true, true) => "Y",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}
