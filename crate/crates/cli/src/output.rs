//! Data tables and the files of a run.
//!
//! CSV: comma separated, header row, LF line endings. Floats are written in
//! Rust's shortest round-trip form, switching to exponent notation for very
//! small and very large magnitudes; counts are plain integers. JSON tables are `{"columns": [...], "rows":
//! [[...]]}`; non-finite numbers become `null`.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{FileEntry, Manifest, ScenarioConfig, Versions};
use crate::{CliError, ScenarioOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Num(v) => write!(f, "{v:?}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// A named rectangular table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    #[serde(skip)]
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut s = serde_json::to_vec_pretty(self).expect("tables serialise");
        s.push(b'\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileEntry, CliError> {
    fs::write(dir.join(name), bytes).map_err(|e| CliError::Io(format!("{name}: {e}")))?;
    Ok(FileEntry { name: name.to_string(), sha256: sha256_hex(bytes) })
}

/// Writes every table, `report.json` and finally `manifest.json`.
pub fn write_run(
    dir: &Path,
    cfg: &ScenarioConfig,
    out: &ScenarioOutput,
    format: Format,
) -> Result<Manifest, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for t in &out.tables {
        let (name, bytes) = match format {
            Format::Csv => (format!("{}.csv", t.name), t.to_csv()?),
            Format::Json => (format!("{}.json", t.name), t.to_json()),
        };
        files.push(write(dir, &name, &bytes)?);
    }
    let mut report = serde_json::to_vec_pretty(&out.report).expect("reports serialise");
    report.push(b'\n');
    files.push(write(dir, "report.json", &report)?);
    let config_json = cfg.to_canonical_json();
    let manifest = Manifest {
        scenario: cfg.scenario.clone(),
        seed: cfg.seed.unwrap_or(0),
        config: cfg.clone(),
        config_sha256: sha256_hex(config_json.as_bytes()),
        versions: Versions {
            cli: env!("CARGO_PKG_VERSION").to_string(),
            core: seqprob_core::VERSION.to_string(),
        },
        format: format.name().to_string(),
        files,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifests serialise");
    bytes.push(b'\n');
    fs::write(dir.join("manifest.json"), bytes).map_err(|e| CliError::Io(format!("manifest.json: {e}")))?;
    Ok(manifest)
}
