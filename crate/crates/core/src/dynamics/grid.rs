use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Site;

/// Uniform grid of `n_steps` times from `t_start` to `t_end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start < 0.0 {
            return Err(Error::InvalidGrid(format!("times must be finite and non-negative, got [{t_start}, {t_end}]")));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid(format!("t_end = {t_end} must exceed t_start = {t_start}")));
        }
        if n_steps < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 steps, got {n_steps}")));
        }
        Ok(Self { t_start, t_end, n_steps })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_steps - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.n_steps {
            self.t_end
        } else {
            self.t_start + i as f64 * self.dt()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_steps).map(|i| self.time(i)).collect()
    }

    /// Same span with at most `max_steps` points.
    pub fn capped(&self, max_steps: usize) -> Self {
        Self {
            n_steps: self.n_steps.min(max_steps.max(2)),
            ..*self
        }
    }
}

/// Named amplitude channels of the survival decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Numeric,
    Contour,
    PoleSum,
    NearZone,
    FarZone,
    WeakCoupling,
    FreeMotion,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::Numeric,
        Channel::Contour,
        Channel::PoleSum,
        Channel::NearZone,
        Channel::FarZone,
        Channel::WeakCoupling,
        Channel::FreeMotion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Numeric => "numeric",
            Channel::Contour => "contour",
            Channel::PoleSum => "pole_sum",
            Channel::NearZone => "near_zone",
            Channel::FarZone => "far_zone",
            Channel::WeakCoupling => "weak_coupling",
            Channel::FreeMotion => "free_motion",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Complex amplitude channels on a shared time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesTable {
    grid: TimeGrid,
    channels: BTreeMap<Channel, Vec<Complex64>>,
    survival: Vec<f64>,
}

impl TimeSeriesTable {
    pub fn new(grid: TimeGrid) -> Self {
        Self {
            grid,
            channels: BTreeMap::new(),
            survival: Vec::new(),
        }
    }

    /// Adds or replaces a channel; the numeric channel also sets the survival probability.
    pub fn insert(&mut self, channel: Channel, values: Vec<Complex64>) -> Result<()> {
        if values.len() != self.grid.n_steps() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.n_steps(),
                got: values.len(),
            });
        }
        if channel == Channel::Numeric {
            self.survival = values.iter().map(|a| a.norm_sqr()).collect();
        }
        self.channels.insert(channel, values);
        Ok(())
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn channel(&self, channel: Channel) -> Option<&[Complex64]> {
        self.channels.get(&channel).map(|v| v.as_slice())
    }

    pub fn channels(&self) -> impl Iterator<Item = (Channel, &[Complex64])> {
        self.channels.iter().map(|(c, v)| (*c, v.as_slice()))
    }

    /// `|numeric|^2`, empty when the numeric channel is absent.
    pub fn survival(&self) -> &[f64] {
        &self.survival
    }
}

/// Site-resolved probabilities, one row per grid time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapTable {
    grid: TimeGrid,
    sites: Vec<Site>,
    probs: Vec<f64>,
}

impl HeatmapTable {
    pub fn new(grid: TimeGrid, sites: Vec<Site>, probs: Vec<f64>) -> Result<Self> {
        let expected = grid.n_steps() * sites.len();
        if probs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: probs.len(),
            });
        }
        Ok(Self { grid, sites, probs })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn n_rows(&self) -> usize {
        self.grid.n_steps()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.sites.len();
        &self.probs[i * n..(i + 1) * n]
    }

    pub fn prob(&self, i: usize, site: Site) -> Option<f64> {
        let j = self.sites.iter().position(|&s| s == site)?;
        Some(self.row(i)[j])
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows()).map(|i| self.row(i).iter().sum()).collect()
    }
}
