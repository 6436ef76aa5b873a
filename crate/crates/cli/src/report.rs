//! Serialization helpers: CSV trajectories and JSON reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! parse → re-emit is byte-identical and runs reproduce byte-for-byte.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use thermoq::experiments::ScanPoint;

use crate::{io_err, CliError};

#[derive(Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub violations: usize,
}

#[derive(Serialize)]
pub struct ScanReport {
    pub points: Vec<ScanPoint<f64>>,
    pub summary: ScanSummary,
}

pub fn write_csv<'a>(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = &'a [f64]>,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let mut line = String::new();
    (|| {
        writeln!(w, "{header}")?;
        for row in rows {
            line.clear();
            for (i, &x) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                // Canonicalize -0 so zero columns print as `0`.
                let x = if x == 0.0 { 0.0 } else { x };
                line.push_str(&x.to_string());
            }
            writeln!(w, "{line}")?;
        }
        w.flush()
    })()
    .map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    (|| {
        serde_json::to_writer_pretty(&mut w, value)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok::<(), std::io::Error>(())
    })()
    .map_err(|e| io_err(path, e))
}
