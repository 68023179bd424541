//! Small fitting helpers for time series and heatmaps.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::HeatmapTable;
use crate::model::Site;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares; `None` with fewer than two distinct abscissae.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (x[i] - mx, y[i] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

fn extrema(t: &[f64], y: &[f64], want_max: bool) -> Vec<(f64, f64)> {
    let s = if want_max { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        let (a, b, c) = (s * y[i - 1], s * y[i], s * y[i + 1]);
        if b > a && b >= c {
            // Parabola through the three samples (uniform spacing assumed locally).
            let h = 0.5 * (t[i + 1] - t[i - 1]);
            let denom = a - 2.0 * b + c;
            let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            let peak = b - 0.25 * (a - c) * shift;
            out.push((t[i] + shift * h, s * peak));
        }
    }
    out
}

/// Interior local maxima with parabolic refinement.
pub fn local_maxima(t: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    extrema(t, y, true)
}

/// Interior local minima with parabolic refinement.
pub fn local_minima(t: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    extrema(t, y, false)
}

/// Angular frequency from the mean spacing of successive maxima.
pub fn oscillation_frequency(t: &[f64], y: &[f64]) -> Option<f64> {
    let peaks = local_maxima(t, y);
    if peaks.len() < 2 {
        return None;
    }
    let span = peaks[peaks.len() - 1].0 - peaks[0].0;
    Some(2.0 * PI * (peaks.len() - 1) as f64 / span)
}

/// Angular frequency of the strongest spectral line of `y` in `[w_min, w_max]`,
/// from a Hann-windowed periodogram refined by golden-section search.
pub fn dominant_frequency(t: &[f64], y: &[f64], w_min: f64, w_max: f64) -> Option<f64> {
    let n = t.len().min(y.len());
    if n < 8 || !(w_max > w_min) || w_min < 0.0 {
        return None;
    }
    let mean = y[..n].iter().sum::<f64>() / n as f64;
    let (t0, t1) = (t[0], t[n - 1]);
    let span = t1 - t0;
    let weighted: Vec<f64> = (0..n)
        .map(|i| {
            let x = (t[i] - t0) / span;
            (y[i] - mean) * (std::f64::consts::PI * x).sin().powi(2)
        })
        .collect();
    let power = |w: f64| {
        let (mut c, mut s) = (0.0, 0.0);
        for i in 0..n {
            let (si, ci) = (w * t[i]).sin_cos();
            c += weighted[i] * ci;
            s += weighted[i] * si;
        }
        c * c + s * s
    };
    // Sample well below the spectral resolution 2 pi / span.
    let dw = PI / span / 8.0;
    let steps = ((w_max - w_min) / dw).ceil() as usize;
    let best = (0..=steps)
        .map(|i| w_min + i as f64 * dw)
        .max_by(|a, b| power(*a).total_cmp(&power(*b)))?;
    let (mut a, mut b) = ((best - dw).max(w_min), (best + dw).min(w_max));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if power(c) > power(d) {
            b = d;
        } else {
            a = c;
        }
    }
    Some(0.5 * (a + b))
}

/// Log-log slope of the upper envelope of `y` over `[t0, t1]`, from the
/// maxima of `n_windows` logarithmically spaced windows.
pub fn envelope_loglog_slope(t: &[f64], y: &[f64], t0: f64, t1: f64, n_windows: usize) -> Option<LinearFit> {
    if n_windows < 2 || t0 <= 0.0 || t1 <= t0 {
        return None;
    }
    let ratio = (t1 / t0).ln() / n_windows as f64;
    let mut lx = Vec::with_capacity(n_windows);
    let mut ly = Vec::with_capacity(n_windows);
    for w in 0..n_windows {
        let a = t0 * (ratio * w as f64).exp();
        let b = t0 * (ratio * (w + 1) as f64).exp();
        let best = t
            .iter()
            .zip(y)
            .filter(|(&ti, _)| ti >= a && ti < b)
            .max_by(|x, y| x.1.total_cmp(y.1));
        if let Some((&ti, &yi)) = best {
            if yi > 0.0 {
                lx.push(ti.ln());
                ly.push(yi.ln());
            }
        }
    }
    linear_fit(&lx, &ly)
}

/// Cell of maximal probability on one sublattice at each heatmap row inside
/// `[t0, t1]`, skipping the first `skip_cells` cells.
pub fn front_positions(map: &HeatmapTable, b_sublattice: bool, t0: f64, t1: f64, skip_cells: usize) -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    for i in 0..map.n_rows() {
        let t = map.grid().time(i);
        if t < t0 || t > t1 {
            continue;
        }
        let row = map.row(i);
        let best = map
            .sites()
            .iter()
            .zip(row)
            .filter(|(s, _)| match s {
                Site::A(c) => !b_sublattice && *c > skip_cells,
                Site::B(c) => b_sublattice && *c > skip_cells,
                Site::Emitter => false,
            })
            .max_by(|a, b| a.1.total_cmp(b.1));
        if let Some((s, _)) = best {
            out.push((t, s.cell()));
        }
    }
    out
}

/// Speed of the probability front on one sublattice.
pub fn front_velocity(map: &HeatmapTable, b_sublattice: bool, t0: f64, t1: f64, skip_cells: usize) -> Option<LinearFit> {
    let pts = front_positions(map, b_sublattice, t0, t1, skip_cells);
    let t: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let n: Vec<f64> = pts.iter().map(|p| p.1 as f64).collect();
    linear_fit(&t, &n)
}

/// Localization length from `ln P(n) = c - 2 (n - 1) / xi` over cells `1..=n_max`.
pub fn envelope_length(probs_by_cell: &[f64]) -> Option<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = probs_by_cell
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| (i as f64, p.ln()))
        .unzip();
    let fit = linear_fit(&x, &y)?;
    Some(-2.0 / fit.slope)
}
