//! Run configuration: a `key = value` file merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use ssh_emitter::CouplingParams;

/// Keys accepted in a config file. Flags use the same names with `-` for `_`.
pub const KNOWN_KEYS: [&str; 12] = [
    "j1", "j2", "g", "cells", "t_max", "steps", "out", "format", "g_min", "g_max", "g_step", "samples",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A configuration error; always maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Values as they come from either source, before defaults are applied.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Key = value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub j1: Option<f64>,
    #[arg(long)]
    pub j2: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    /// Number of lattice cells (default: smallest size passing the reflection guard).
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time-grid points, both ends included.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub g_min: Option<f64>,
    #[arg(long)]
    pub g_max: Option<f64>,
    #[arg(long)]
    pub g_step: Option<f64>,
    /// Points per winding curve.
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Fully resolved configuration, recorded verbatim in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: CouplingParams,
    pub cells: Option<usize>,
    pub t_max: f64,
    pub steps: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub g_min: f64,
    pub g_max: f64,
    pub g_step: f64,
    pub samples: usize,
}

/// Parses a config file body. Blank lines and `#` comments are ignored.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return err(format!("line {}: expected key = value, got {raw:?}", i + 1));
        };
        let key = k.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return err(format!("line {}: unknown key {:?}", i + 1, k.trim()));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return err(format!("line {}: duplicate key {key:?}", i + 1));
        }
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| ConfigError(format!("invalid value {v:?} for {key}"))),
    }
}

impl Overrides {
    /// Fills every field not set on the command line from the config file.
    fn merge_file(mut self, map: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        self.j1 = self.j1.or(parse_value(map, "j1")?);
        self.j2 = self.j2.or(parse_value(map, "j2")?);
        self.g = self.g.or(parse_value(map, "g")?);
        self.cells = self.cells.or(parse_value(map, "cells")?);
        self.t_max = self.t_max.or(parse_value(map, "t_max")?);
        self.steps = self.steps.or(parse_value(map, "steps")?);
        self.out = self.out.or(parse_value(map, "out")?);
        self.g_min = self.g_min.or(parse_value(map, "g_min")?);
        self.g_max = self.g_max.or(parse_value(map, "g_max")?);
        self.g_step = self.g_step.or(parse_value(map, "g_step")?);
        self.samples = self.samples.or(parse_value(map, "samples")?);
        if self.format.is_none() {
            self.format = match map.get("format").map(String::as_str) {
                None => None,
                Some("csv") => Some(Format::Csv),
                Some("json") => Some(Format::Json),
                Some(other) => return err(format!("invalid value {other:?} for format (csv|json)")),
            };
        }
        Ok(self)
    }

    /// Fills gaps from the config file and defaults, then validates.
    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let merged = match &self.config {
            Some(path) => {
                let map = read_file(path)?;
                self.clone().merge_file(&map)?
            }
            None => self,
        };
        let params = CouplingParams::new(
            merged.j1.unwrap_or(1.5),
            merged.j2.unwrap_or(1.0),
            merged.g.unwrap_or(0.1),
        )
        .map_err(|e| ConfigError(e.to_string()))?;
        let cfg = RunConfig {
            params,
            cells: merged.cells,
            t_max: merged.t_max.unwrap_or(100.0),
            steps: merged.steps.unwrap_or(401),
            out: merged.out,
            format: merged.format.unwrap_or(Format::Csv),
            g_min: merged.g_min.unwrap_or(0.0),
            g_max: merged.g_max.unwrap_or(3.0),
            g_step: merged.g_step.unwrap_or(0.01),
            samples: merged.samples.unwrap_or(512),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_file(&text)
}

impl RunConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        if self.cells == Some(0) {
            return err("cells must be at least 1");
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return err(format!("t_max must be positive (got {})", self.t_max));
        }
        if self.steps < 2 {
            return err(format!("steps must be at least 2 (got {})", self.steps));
        }
        if !(self.g_min.is_finite() && self.g_max.is_finite() && self.g_min >= 0.0 && self.g_max >= self.g_min) {
            return err(format!("invalid sweep range [{}, {}]", self.g_min, self.g_max));
        }
        if !(self.g_step.is_finite() && self.g_step > 0.0) {
            return err(format!("g_step must be positive (got {})", self.g_step));
        }
        if self.samples < 8 {
            return err(format!("samples must be at least 8 (got {})", self.samples));
        }
        Ok(())
    }

    /// Output directory, defaulting to `./out`.
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Sweep values `g_min, g_min + step, ...` up to and including `g_max`.
    pub fn sweep_values(&self) -> Vec<f64> {
        let n = ((self.g_max - self.g_min) / self.g_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.g_min + i as f64 * self.g_step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing() {
        let map = parse_file("# comment\nj1 = 1.5\n\nt-max=20 # trailing\n").unwrap();
        assert_eq!(map["j1"], "1.5");
        assert_eq!(map["t_max"], "20");
        assert!(parse_file("bogus = 1").is_err());
        assert!(parse_file("j1 1.5").is_err());
        assert!(parse_file("g = 1\ng = 2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let map = parse_file("j1 = 2\ng = 0.3\nformat = json").unwrap();
        let flags = Overrides { g: Some(0.7), ..Default::default() };
        let merged = flags.merge_file(&map).unwrap();
        assert_eq!(merged.j1, Some(2.0));
        assert_eq!(merged.g, Some(0.7));
        assert_eq!(merged.format, Some(Format::Json));
    }

    #[test]
    fn validation() {
        assert!(Overrides { j1: Some(-1.0), ..Default::default() }.resolve().is_err());
        assert!(Overrides { steps: Some(1), ..Default::default() }.resolve().is_err());
        assert!(Overrides { g_step: Some(0.0), ..Default::default() }.resolve().is_err());
        let cfg = Overrides { g_min: Some(0.0), g_max: Some(1.0), g_step: Some(0.25), ..Default::default() }
            .resolve()
            .unwrap();
        assert_eq!(cfg.sweep_values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
