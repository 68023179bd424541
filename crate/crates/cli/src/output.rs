//! Table serialization and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use ssh_emitter::spectrum::{classify_region, localization, region_transitions, z_plus_closed_form};
use ssh_emitter::CouplingParams;

use crate::config::{Format, RunConfig};

/// Bumped whenever the column layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// A named, column-typed table in row-major order.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<String>) -> Self {
        Table { name, columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn schema(&self) -> String {
        format!("{}/{}", self.name, SCHEMA_VERSION)
    }

    /// CSV with a `# schema: name/version` first line and full double precision.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# schema: {}\n{}\n", self.schema(), self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    /// One array per column, plus the column order and the inline manifest.
    pub fn to_json(&self, manifest: &Value) -> Value {
        let mut data = Map::new();
        for (j, name) in self.columns.iter().enumerate() {
            data.insert(name.clone(), Value::Array(self.rows.iter().map(|r| r[j].json()).collect()));
        }
        json!({
            "schema": self.schema(),
            "columns": self.columns,
            "data": data,
            "manifest": manifest,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionRecord {
    pub g: f64,
    pub below: String,
    pub above: String,
}

/// Closed-form constants attached to every run.
#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub region: String,
    pub j_minus: f64,
    pub j_plus: f64,
    pub g_str: f64,
    pub g_weak: Option<f64>,
    pub g_ep: Option<f64>,
    pub xi: Option<f64>,
    pub r: Option<f64>,
    pub z_plus: Option<[f64; 2]>,
    pub z_minus: Option<[f64; 2]>,
    pub transitions: Vec<TransitionRecord>,
}

impl Derived {
    pub fn new(params: &CouplingParams) -> Self {
        let z = z_plus_closed_form(params).ok();
        let loc = localization(params).ok();
        let g_hi = 1.5 * params.g_str();
        let transitions = region_transitions(params, 0.0, g_hi, 601)
            .map(|v| {
                v.into_iter()
                    .map(|t| TransitionRecord {
                        g: t.g,
                        below: t.below.to_string(),
                        above: t.above.to_string(),
                    })
                    .collect()
            })
            .unwrap_or_default();
        Derived {
            region: classify_region(params).to_string(),
            j_minus: params.j_minus(),
            j_plus: params.j_plus(),
            g_str: params.g_str(),
            g_weak: params.g_weak(),
            g_ep: params.g_ep(),
            xi: loc.map(|l| l.xi),
            r: loc.map(|l| l.r),
            z_plus: z.map(|z| [z.re, z.im]),
            z_minus: z.map(|z| [-z.re, -z.im]),
            transitions,
        }
    }
}

/// Everything needed to reproduce and annotate one run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub command: &'static str,
    pub config: RunConfig,
    pub derived: Derived,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<FileDigest>,
}

impl Manifest {
    pub fn new(command: &'static str, config: &RunConfig) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            command,
            config: config.clone(),
            derived: Derived::new(&config.params),
            summary: Value::Null,
            wall_clock_seconds: None,
            files: Vec::new(),
        }
    }

    /// The timing-free part, inlined into JSON data files so they stay bit-reproducible.
    fn inline(&self) -> Value {
        let mut m = self.clone();
        m.files.clear();
        m.wall_clock_seconds = None;
        serde_json::to_value(m).expect("manifest serializes")
    }
}

/// Writes data files and, last, `manifest.json`, all under one directory.
pub struct Writer {
    dir: PathBuf,
    format: Format,
    started: Instant,
    pub manifest: Manifest,
}

impl Writer {
    pub fn new(dir: &Path, format: Format, manifest: Manifest, started: Instant) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            format,
            started,
            manifest,
        })
    }

    pub fn table(&mut self, table: &Table) -> Result<PathBuf> {
        let body = match self.format {
            Format::Csv => table.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&table.to_json(&self.manifest.inline()))?;
                s.push('\n');
                s
            }
        };
        self.raw(&format!("{}.{}", table.name, self.format.extension()), body.as_bytes())
    }

    pub fn raw(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.manifest.files.push(FileDigest {
            path: PathBuf::from(name),
            bytes: bytes.len(),
            sha256: hex(&Sha256::digest(bytes)),
        });
        Ok(path)
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.manifest.wall_clock_seconds = Some(self.started.elapsed().as_secs_f64());
        let path = self.dir.join("manifest.json");
        let mut s = serde_json::to_string_pretty(&self.manifest)?;
        s.push('\n');
        fs::write(&path, s).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", vec!["g".into(), "region".into(), "n".into()]);
        t.push(vec![0.1.into(), "V".into(), 3usize.into()]);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# schema: demo/1");
        assert_eq!(lines[1], "g,region,n");
        assert_eq!(lines[2], "1.0000000000000001e-1,V,3");
        let parsed: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(parsed, 0.1);
    }

    #[test]
    fn json_mirrors_columns() {
        let mut t = Table::new("demo", vec!["a".into(), "b".into()]);
        t.push(vec![1.0.into(), "x".into()]);
        t.push(vec![2.0.into(), "y".into()]);
        let v = t.to_json(&Value::Null);
        assert_eq!(v["columns"], json!(["a", "b"]));
        assert_eq!(v["data"]["a"], json!([1.0, 2.0]));
        assert_eq!(v["data"]["b"], json!(["x", "y"]));
    }

    #[test]
    fn sha_hex() {
        assert_eq!(
            hex(&Sha256::digest(b"")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
