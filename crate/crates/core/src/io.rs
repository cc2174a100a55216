//! File formats shared by the command-line tool: numeric CSV tables,
//! run manifests and JSON helpers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{PreparationSet, StatesFile};
use crate::realist::{EnsembleFile, EpistemicEnsemble};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table with a fixed header whose numeric cells use [`format_f64`].
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

pub enum Cell {
    Int(u64),
    Real(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(
            row.into_iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Real(r) => format_f64(r),
                })
                .collect(),
        );
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("ascii csv"))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_string()?)?;
        Ok(())
    }
}

/// Reads a CSV with headers into named numeric columns.
pub fn read_numeric_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!("row {}: cannot parse {cell:?} as a number", line + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_pretty(value)?)?;
    Ok(())
}

pub fn read_states(path: &Path, tol: f64) -> Result<PreparationSet> {
    let text = fs::read_to_string(path)?;
    let file: StatesFile = serde_json::from_str(&text)?;
    file.to_preparation_set(tol)
}

pub fn read_ensemble(path: &Path) -> Result<EpistemicEnsemble> {
    let text = fs::read_to_string(path)?;
    let file: EnsembleFile = serde_json::from_str(&text)?;
    file.to_ensemble()
}

/// Provenance record written next to every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            config,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: 0.0,
            outputs: Vec::new(),
        }
    }
}

/// `<output>.manifest.json`, or `<command>.manifest.json` when writing to stdout.
pub fn manifest_path(explicit: Option<&Path>, output: Option<&Path>, command: &str) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match output {
        Some(out) => {
            let mut name = out.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        }
        None => PathBuf::from(format!("{command}.manifest.json")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_roundtrip() {
        for v in [5.0 / 6.0, 0.1, 1.0 / 3.0, -2.5e-7, 0.0, 1.0] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_table_output() {
        let mut t = CsvTable::new(vec!["sample_id", "deviation"]);
        t.push(vec![Cell::from(0usize), Cell::from(0.25)]);
        assert_eq!(t.to_string().unwrap(), "sample_id,deviation\n0,2.5000000000000000e-1\n");
    }

    #[test]
    fn manifest_paths() {
        assert_eq!(
            manifest_path(None, Some(Path::new("out/scan.csv")), "scan"),
            PathBuf::from("out/scan.csv.manifest.json")
        );
        assert_eq!(manifest_path(None, None, "metrics"), PathBuf::from("metrics.manifest.json"));
    }
}
