use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{FourierIndex, SpectrumTable};
use crate::bits::Bits;
use crate::error::{Error, Result};

/// One line of the spectrum export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub x: Bits,
    pub s1: Bits,
    pub s2: Bits,
    pub value: f64,
}

pub fn write_spectrum_jsonl<W: Write>(spectrum: &SpectrumTable, mut w: W) -> Result<()> {
    for (x, s, value) in spectrum.iter() {
        let rec = SpectrumRecord { x: x.clone(), s1: s.s1.clone(), s2: s.s2.clone(), value };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a spectrum back; `m` and `r` must be given since an empty file carries neither.
pub fn read_spectrum_jsonl<R: BufRead>(m: usize, r: usize, reader: R) -> Result<SpectrumTable> {
    let mut out = SpectrumTable::new(m, r);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SpectrumRecord =
            serde_json::from_str(&line).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.insert(rec.x, FourierIndex::new(rec.s1, rec.s2)?, rec.value)?;
    }
    Ok(out)
}
