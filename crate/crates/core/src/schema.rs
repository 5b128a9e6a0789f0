//! Circuit file format shared by the generators and the command line.
//!
//! ```json
//! {"n": 2, "gates": [{"kind": "H", "targets": [0]}], "twirl_sites": [{"id": 0, "wire": 0, "position": 0}],
//!  "measured_wires": [0], "kind": "all_noisy", "noise": {"e1": 0.1, "e2": 0.1, "e3": 0.0}, "seed": 5}
//! ```
//!
//! `U1`/`U2` gates carry a `matrix` of `[re, im]` pairs, row-major.

use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitSpec, Gate, GateKind, NoiseParams, TwirlSite};
use crate::error::{Error, Result};
use crate::fast::{EnsembleKind, EnsembleSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRecord {
    pub kind: String,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteRecord {
    pub id: usize,
    pub wire: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub gates: Vec<GateRecord>,
    pub twirl_sites: Vec<SiteRecord>,
    pub measured_wires: Vec<usize>,
    pub kind: EnsembleKind,
    pub noise: NoiseParams,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pre_measure_rotations: Vec<GateRecord>,
}

fn matrix_rows<const N: usize>(rows: &[Vec<[f64; 2]>]) -> Result<[[C64; N]; N]> {
    if rows.len() != N || rows.iter().any(|r| r.len() != N) {
        return Err(Error::Parse(format!("matrix must be {N}×{N}")));
    }
    let mut out = [[C64::new(0.0, 0.0); N]; N];
    for (i, row) in rows.iter().enumerate() {
        for (j, [re, im]) in row.iter().enumerate() {
            out[i][j] = C64::new(*re, *im);
        }
    }
    Ok(out)
}

fn to_rows<const N: usize>(m: &[[C64; N]; N]) -> Vec<Vec<[f64; 2]>> {
    m.iter().map(|row| row.iter().map(|v| [v.re, v.im]).collect()).collect()
}

impl GateRecord {
    pub fn from_gate(g: &Gate) -> Self {
        let matrix = match &g.kind {
            GateKind::Unitary1(m) => Some(to_rows(m)),
            GateKind::Unitary2(m) => Some(to_rows(m)),
            _ => None,
        };
        GateRecord { kind: g.kind.name().to_string(), targets: g.targets.clone(), matrix }
    }

    pub fn to_gate(&self) -> Result<Gate> {
        let needs_matrix = matches!(self.kind.as_str(), "U1" | "U2");
        if needs_matrix != self.matrix.is_some() {
            return Err(Error::Parse(format!(
                "gate {}: matrix is required for U1/U2 and forbidden otherwise",
                self.kind
            )));
        }
        let kind = match self.kind.as_str() {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "CNOT" => GateKind::Cnot,
            "CZ" => GateKind::Cz,
            "T" => GateKind::T,
            "U1" => GateKind::Unitary1(matrix_rows::<2>(self.matrix.as_deref().unwrap_or_default())?),
            "U2" => GateKind::Unitary2(matrix_rows::<4>(self.matrix.as_deref().unwrap_or_default())?),
            other => return Err(Error::Parse(format!("unknown gate kind {other:?}"))),
        };
        Gate::new(kind, self.targets.clone())
    }
}

impl CircuitFile {
    pub fn from_ensemble(e: &EnsembleSpec, seed: Option<u64>) -> Self {
        let c = &e.circuit;
        CircuitFile {
            n: c.n,
            gates: c.gates.iter().map(GateRecord::from_gate).collect(),
            twirl_sites: c
                .twirl_sites
                .iter()
                .map(|s| SiteRecord { id: s.id, wire: s.wire, position: s.position })
                .collect(),
            measured_wires: c.measured_wires.clone(),
            kind: e.kind,
            noise: e.noise,
            seed,
            pre_measure_rotations: c.pre_measure_rotations.iter().map(GateRecord::from_gate).collect(),
        }
    }

    pub fn to_ensemble(&self) -> Result<EnsembleSpec> {
        let gates = self.gates.iter().map(GateRecord::to_gate).collect::<Result<Vec<_>>>()?;
        let rotations = self.pre_measure_rotations.iter().map(GateRecord::to_gate).collect::<Result<Vec<_>>>()?;
        let sites = self
            .twirl_sites
            .iter()
            .map(|s| TwirlSite { id: s.id, wire: s.wire, position: s.position })
            .collect();
        let c = CircuitSpec::new(self.n, gates, sites, self.measured_wires.clone(), rotations)?;
        EnsembleSpec::new(self.kind, c, self.noise)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("circuit file: {e}")))
    }
}

pub fn read_circuit(path: &Path) -> Result<(EnsembleSpec, Option<u64>)> {
    let file = CircuitFile::from_json(&fs::read_to_string(path)?)?;
    Ok((file.to_ensemble()?, file.seed))
}

pub fn write_circuit(path: &Path, e: &EnsembleSpec, seed: Option<u64>) -> Result<()> {
    fs::write(path, CircuitFile::from_ensemble(e, seed).to_json()?)?;
    Ok(())
}
