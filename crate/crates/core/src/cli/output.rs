use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Command;
use crate::error::Result;
use crate::fast::TermBudget;

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

/// One emitted result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// Hash of the config, so equal configs share an id.
    pub experiment_id: String,
    pub version: String,
    pub config: Command,
    pub metrics: serde_json::Value,
    pub budgets: Vec<TermBudget>,
    pub wall_clock_ms: u64,
}

pub fn experiment_id(cmd: &Command) -> Result<String> {
    let digest = Sha256::digest(serde_json::to_vec(cmd)?);
    Ok(hex::encode(&digest[..8]))
}

pub struct Recorder {
    started: Instant,
}

impl Recorder {
    pub fn start() -> Self {
        Recorder { started: Instant::now() }
    }

    pub fn finish(self, cmd: &Command, metrics: serde_json::Value, budgets: Vec<TermBudget>) -> Result<ResultRecord> {
        Ok(ResultRecord {
            experiment_id: experiment_id(cmd)?,
            version: VERSION.to_string(),
            config: cmd.clone(),
            metrics,
            budgets,
            wall_clock_ms: self.started.elapsed().as_millis() as u64,
        })
    }
}

/// Writes `record` to `path`, or to stdout.
pub fn emit(record: &ResultRecord, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(record)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => crate::error::Error::Io(io),
        other => crate::error::Error::Parse(format!("csv: {other:?}")),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
