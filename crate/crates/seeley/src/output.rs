use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use seeley_core::coeffs::{node, SeeleyCoefficients};

use crate::error::{CliError, Result};

/// Scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush().map_err(|e| CliError::io("<csv>", e))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRecord {
    pub j: usize,
    pub node: String,
    pub exact: String,
    pub shadow: String,
}

pub fn coefficient_records(c: &SeeleyCoefficients) -> Vec<CoefficientRecord> {
    c.weights()
        .iter()
        .zip(c.weights_f64())
        .enumerate()
        .map(|(j, (w, s))| CoefficientRecord {
            j,
            node: node(j).to_string(),
            exact: w.to_string(),
            shadow: fmt17(s),
        })
        .collect()
}

/// `path` with its extension replaced by `json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Write the CSV and its JSON metadata next to it, or the CSV alone to
/// stdout when no path is given.
pub fn emit(table: &Table, metadata: &serde_json::Value, path: Option<&Path>) -> Result<()> {
    match path {
        None => {
            let stdout = std::io::stdout();
            table.write_to(stdout.lock())
        }
        Some(path) => {
            let mut csv_bytes = Vec::new();
            table.write_to(&mut csv_bytes)?;
            let mut json = serde_json::to_vec_pretty(metadata)?;
            json.push(b'\n');
            std::fs::write(path, csv_bytes).map_err(|e| CliError::io(path, e))?;
            let meta = metadata_path(path);
            std::fs::write(&meta, json).map_err(|e| CliError::io(meta, e))
        }
    }
}
