//! Circuit description shared by the oracle and the fast evaluator.
//!
//! A [`CircuitSpec`] describes a whole ensemble: the gate list is the
//! noiseless skeleton, and every [`TwirlSite`] marks where a random Pauli
//! `X^{y2} Z^{y1}` followed by the noise channel is inserted. Fixing the twirl
//! bits `y` picks one member of the ensemble.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::bits::Bits;
use crate::error::{Error, Result};

pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

/// Absolute tolerance for unitarity and complex equality checks.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    S,
    X,
    Y,
    Z,
    Cnot,
    Cz,
    T,
    Unitary1(Mat2),
    /// Basis order `|t0 t1⟩` with `targets[0]` as the most significant bit.
    Unitary2(Mat4),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Unitary2(_) => 2,
            _ => 1,
        }
    }

    pub fn is_clifford(&self) -> bool {
        matches!(
            self,
            GateKind::H
                | GateKind::S
                | GateKind::X
                | GateKind::Y
                | GateKind::Z
                | GateKind::Cnot
                | GateKind::Cz
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::T => "T",
            GateKind::Unitary1(_) => "U1",
            GateKind::Unitary2(_) => "U2",
        }
    }

    /// Single-qubit matrix, if the gate acts on one wire.
    pub fn matrix1(&self) -> Option<Mat2> {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Some(match self {
            GateKind::H => [[h, h], [h, -h]],
            GateKind::S => [[o, z], [z, i]],
            GateKind::X => [[z, o], [o, z]],
            GateKind::Y => [[z, -i], [i, z]],
            GateKind::Z => [[o, z], [z, -o]],
            GateKind::T => [[o, z], [z, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
            GateKind::Unitary1(m) => *m,
            _ => return None,
        })
    }

    /// Two-qubit matrix, if the gate acts on two wires.
    pub fn matrix2(&self) -> Option<Mat4> {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        Some(match self {
            GateKind::Cnot => [[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]],
            GateKind::Cz => [[o, z, z, z], [z, o, z, z], [z, z, o, z], [z, z, z, -o]],
            GateKind::Unitary2(m) => *m,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidCircuit(format!(
                "{} takes {} target(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::InvalidCircuit(format!(
                "{} targets must be distinct, got {:?}",
                kind.name(),
                targets
            )));
        }
        match &kind {
            GateKind::Unitary1(m) => check_unitary(&m.iter().flatten().copied().collect::<Vec<_>>(), 2)?,
            GateKind::Unitary2(m) => check_unitary(&m.iter().flatten().copied().collect::<Vec<_>>(), 4)?,
            _ => {}
        }
        Ok(Gate { kind, targets })
    }

    pub fn one(kind: GateKind, wire: usize) -> Result<Self> {
        Gate::new(kind, vec![wire])
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Result<Self> {
        Gate::new(kind, vec![a, b])
    }

    pub fn is_clifford(&self) -> bool {
        self.kind.is_clifford()
    }
}

/// Max-norm deviation of `M† M` from the identity.
pub fn unitarity_deviation(m: &[C64], dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim {
                acc += m[k * dim + i].conj() * m[k * dim + j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

pub(crate) fn check_unitary(m: &[C64], dim: usize) -> Result<()> {
    if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonUnitary(f64::INFINITY));
    }
    let dev = unitarity_deviation(m, dim);
    if dev > UNITARY_TOL {
        return Err(Error::NonUnitary(dev));
    }
    Ok(())
}

/// Twirl + noise applied on `wire` right after `gates[position]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwirlSite {
    pub id: usize,
    pub wire: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub twirl_sites: Vec<TwirlSite>,
    pub measured_wires: Vec<usize>,
    /// Single-qubit gates applied just before readout, on measured wires only.
    pub pre_measure_rotations: Vec<Gate>,
}

impl CircuitSpec {
    pub fn new(
        n: usize,
        gates: Vec<Gate>,
        twirl_sites: Vec<TwirlSite>,
        measured_wires: Vec<usize>,
        pre_measure_rotations: Vec<Gate>,
    ) -> Result<Self> {
        let c = CircuitSpec { n, gates, twirl_sites, measured_wires, pre_measure_rotations };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, g) in self.gates.iter().enumerate() {
            if g.targets.len() != g.kind.arity() {
                return Err(Error::InvalidCircuit(format!("gate {k}: wrong target count")));
            }
            if let Some(&w) = g.targets.iter().find(|&&w| w >= self.n) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {k} targets wire {w} but circuit has {} wires",
                    self.n
                )));
            }
            if g.targets.len() == 2 && g.targets[0] == g.targets[1] {
                return Err(Error::InvalidCircuit(format!("gate {k}: repeated target")));
            }
        }
        for (k, site) in self.twirl_sites.iter().enumerate() {
            if site.id != k {
                return Err(Error::InvalidCircuit(format!(
                    "twirl site ids must be consecutive from 0; entry {k} has id {}",
                    site.id
                )));
            }
            if site.wire >= self.n {
                return Err(Error::InvalidCircuit(format!("twirl site {k} on missing wire {}", site.wire)));
            }
            if site.position >= self.gates.len() {
                return Err(Error::InvalidCircuit(format!(
                    "twirl site {k} at position {} beyond {} gates",
                    site.position,
                    self.gates.len()
                )));
            }
        }
        if self.measured_wires.len() > self.n {
            return Err(Error::InvalidCircuit("more measured wires than qubits".into()));
        }
        for (k, &w) in self.measured_wires.iter().enumerate() {
            if w >= self.n {
                return Err(Error::InvalidCircuit(format!("measured wire {w} out of range")));
            }
            if self.measured_wires[..k].contains(&w) {
                return Err(Error::InvalidCircuit(format!("measured wire {w} listed twice")));
            }
        }
        for g in &self.pre_measure_rotations {
            if g.kind.arity() != 1 || !self.measured_wires.contains(&g.targets[0]) {
                return Err(Error::InvalidCircuit(
                    "pre-measurement rotations must be single-qubit gates on measured wires".into(),
                ));
            }
        }
        Ok(())
    }

    /// Number of twirl sites `m`.
    pub fn m(&self) -> usize {
        self.twirl_sites.len()
    }

    /// Number of measured wires `r`.
    pub fn r(&self) -> usize {
        self.measured_wires.len()
    }

    /// Site ids attached to each gate position, in id order.
    pub fn sites_by_position(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.gates.len()];
        for s in &self.twirl_sites {
            out[s.position].push(s.id);
        }
        out
    }

    /// Site ids on each wire, in execution order.
    pub fn sites_by_wire(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<&TwirlSite> = self.twirl_sites.iter().collect();
        order.sort_by_key(|s| (s.position, s.id));
        let mut out = vec![Vec::new(); self.n];
        for s in order {
            out[s.wire].push(s.id);
        }
        out
    }

    /// Twirl Pauli `(z_exponent, x_exponent) = (y1[k], y2[k])` of site `k`.
    pub fn twirl_bits(&self, y: &Bits, site: usize) -> (bool, bool) {
        let m = self.m();
        (y.bit(site), y.bit(m + site))
    }

    pub(crate) fn check_y(&self, y: &Bits) -> Result<()> {
        if y.len() != 2 * self.m() {
            return Err(Error::SizeMismatch(format!(
                "twirl string has {} bits, circuit needs 2m = {}",
                y.len(),
                2 * self.m()
            )));
        }
        Ok(())
    }
}

/// Minimum over wires of the number of twirl sites on that wire.
pub fn depth_of(c: &CircuitSpec) -> usize {
    c.sites_by_wire().iter().map(Vec::len).min().unwrap_or(0)
}

/// Flip probabilities of the composed channel `E3 ∘ E2 ∘ E1` with
/// `E1` a Z flip, `E2` an X flip and `E3` a Y flip.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct NoiseParams {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl NoiseParams {
    pub fn new(e1: f64, e2: f64, e3: f64) -> Result<Self> {
        let np = NoiseParams { e1, e2, e3 };
        np.validate()?;
        Ok(np)
    }

    /// Dephasing plus bit flip with the same rate.
    pub fn symmetric(eps: f64) -> Result<Self> {
        NoiseParams::new(eps, eps, 0.0)
    }

    pub fn noiseless() -> Self {
        NoiseParams::default()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("e1", self.e1), ("e2", self.e2), ("e3", self.e3)] {
            if !(0.0..0.5).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is outside [0, 0.5)")));
            }
        }
        Ok(())
    }

    /// Largest `ε` with every per-site decay factor at most `(1−2ε)^{|s1|+|s2|}`.
    ///
    /// Equals `min(e1, e2)` without Y flips.
    pub fn epsilon(&self) -> f64 {
        if self.e3 == 0.0 {
            return self.e1.min(self.e2);
        }
        let f = |v: f64| 1.0 - 2.0 * v;
        // sites with duals (1,0), (0,1) and (1,1)
        let worst = (f(self.e1) * f(self.e3))
            .max(f(self.e2) * f(self.e3))
            .max((f(self.e1) * f(self.e2)).sqrt());
        (1.0 - worst) / 2.0
    }

    pub fn is_noiseless(&self) -> bool {
        self.e1 == 0.0 && self.e2 == 0.0 && self.e3 == 0.0
    }
}
