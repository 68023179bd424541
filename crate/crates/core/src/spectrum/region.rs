use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CouplingParams;

/// Relative tolerance for deciding that `g` sits on a region boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Parameter regions of the coupled system, ordered by decreasing `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    I,
    II,
    III,
    IV,
    V,
    BoundaryCase(String),
}

impl RegionLabel {
    pub fn is_boundary(&self) -> bool {
        matches!(self, RegionLabel::BoundaryCase(_))
    }

    /// Regions where `z_+-` are normalizable bound states.
    pub fn has_bound_pair(&self) -> bool {
        matches!(self, RegionLabel::I | RegionLabel::V)
    }

    pub fn short(&self) -> &str {
        match self {
            RegionLabel::I => "I",
            RegionLabel::II => "II",
            RegionLabel::III => "III",
            RegionLabel::IV => "IV",
            RegionLabel::V => "V",
            RegionLabel::BoundaryCase(_) => "boundary",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionLabel::BoundaryCase(d) => write!(f, "boundary ({d})"),
            other => f.write_str(other.short()),
        }
    }
}

fn on_boundary(g: f64, b: f64) -> bool {
    (g - b).abs() <= BOUNDARY_TOL * b.max(1.0)
}

/// Named region boundaries in increasing order of `g`.
pub fn region_boundaries(params: &CouplingParams) -> Vec<(&'static str, f64)> {
    let mut out = Vec::with_capacity(4);
    if let (Some(w), Some(ep)) = (params.g_weak(), params.g_ep()) {
        out.push(("g_weak", w));
        out.push(("g_ep", ep));
    }
    out.push(("g = j1", params.j1()));
    out.push(("g_str", params.g_str()));
    out
}

/// Region of the `(j1, j2, g)` parameter space.
///
/// `g = 0` is reported as a boundary: the emitter is decoupled and no pair exists.
pub fn classify_region(params: &CouplingParams) -> RegionLabel {
    let g = params.g();
    if g == 0.0 {
        return RegionLabel::BoundaryCase("g = 0 (emitter decoupled)".into());
    }
    for (name, b) in region_boundaries(params) {
        if on_boundary(g, b) {
            let what = if name == "g_ep" {
                "g = g_ep (exceptional point)".to_string()
            } else {
                format!("{name} = {b}")
            };
            return RegionLabel::BoundaryCase(what);
        }
    }
    if g > params.g_str() {
        return RegionLabel::I;
    }
    if g > params.j1() {
        return RegionLabel::II;
    }
    match (params.g_weak(), params.g_ep()) {
        (Some(w), Some(ep)) => {
            if g > ep {
                RegionLabel::III
            } else if g > w {
                RegionLabel::IV
            } else {
                RegionLabel::V
            }
        }
        _ => RegionLabel::III,
    }
}

/// A change of region along a sweep in `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub g: f64,
    pub below: RegionLabel,
    pub above: RegionLabel,
}

const BISECTION_WIDTH: f64 = 1e-13;

fn bisect(params: &CouplingParams, mut lo: f64, mut hi: f64, out: &mut Vec<Transition>) -> Result<()> {
    let label = |g: f64| params.with_g(g).map(|p| classify_region(&p));
    let (below, above) = (label(lo)?, label(hi)?);
    if below == above {
        return Ok(());
    }
    while hi - lo > BISECTION_WIDTH * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let m = label(mid)?;
        if m == below {
            lo = mid;
        } else if m == above {
            hi = mid;
        } else if m.is_boundary() {
            out.push(Transition { g: mid, below, above });
            return Ok(());
        } else {
            // A whole region fits between the samples; split.
            bisect(params, lo, mid, out)?;
            return bisect(params, mid, hi, out);
        }
    }
    out.push(Transition {
        g: 0.5 * (lo + hi),
        below,
        above,
    });
    Ok(())
}

/// Region changes for `g` in `[g_min, g_max]`, located by bisection after a
/// scan of `n_samples` points. Samples that land on a boundary are skipped.
pub fn region_transitions(params: &CouplingParams, g_min: f64, g_max: f64, n_samples: usize) -> Result<Vec<Transition>> {
    if !(g_min >= 0.0 && g_max > g_min) || n_samples < 2 {
        return Err(Error::Precondition(format!(
            "invalid sweep [{g_min}, {g_max}] with {n_samples} samples"
        )));
    }
    let mut prev: Option<f64> = None;
    let mut out = Vec::new();
    for i in 0..n_samples {
        let g = g_min + (g_max - g_min) * i as f64 / (n_samples - 1) as f64;
        if classify_region(&params.with_g(g)?).is_boundary() {
            continue;
        }
        if let Some(lo) = prev {
            bisect(params, lo, g, &mut out)?;
        }
        prev = Some(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(j1: f64, j2: f64, g: f64) -> RegionLabel {
        classify_region(&CouplingParams::new(j1, j2, g).unwrap())
    }

    #[test]
    fn five_regions_for_topological_chain() {
        assert_eq!(region(1.5, 1.0, 0.5), RegionLabel::V);
        assert_eq!(region(1.5, 1.0, 1.0), RegionLabel::IV);
        assert_eq!(region(1.5, 1.0, 1.25), RegionLabel::III);
        assert_eq!(region(1.5, 1.0, 1.7), RegionLabel::II);
        assert_eq!(region(1.5, 1.0, 2.5), RegionLabel::I);
    }

    #[test]
    fn three_regions_for_trivial_chain() {
        assert_eq!(region(2.0 / 3.0, 1.0, 0.5), RegionLabel::III);
        assert_eq!(region(2.0 / 3.0, 1.0, 0.9), RegionLabel::II);
        assert_eq!(region(1.0, 1.5, 1.2), RegionLabel::II);
        assert_eq!(region(2.0 / 3.0, 1.0, 2.5), RegionLabel::I);
        // g_str = 1.054 for (2/3, 1), so 1.2 is already past it.
        assert_eq!(region(2.0 / 3.0, 1.0, 1.2), RegionLabel::I);
    }

    #[test]
    fn boundaries_are_reported() {
        let p = CouplingParams::new(1.5, 1.0, 0.1).unwrap();
        for (_, b) in region_boundaries(&p) {
            assert!(region(1.5, 1.0, b).is_boundary(), "g = {b}");
            assert!(!region(1.5, 1.0, b * (1.0 + 1e-9)).is_boundary());
        }
        assert!(matches!(region(1.5, 1.0, 1.25f64.sqrt()), RegionLabel::BoundaryCase(d) if d.contains("exceptional")));
        assert!(region(1.5, 1.0, 0.0).is_boundary());
    }

    #[test]
    fn sweep_transitions() {
        let p = CouplingParams::new(1.5, 1.0, 0.1).unwrap();
        let tr = region_transitions(&p, 0.0, 3.0, 301).unwrap();
        let gs: Vec<f64> = tr.iter().map(|t| t.g).collect();
        let expect = [0.75f64.sqrt(), 1.25f64.sqrt(), 1.5, 3.75f64.sqrt()];
        assert_eq!(gs.len(), 4);
        for (a, b) in gs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(tr[0].below, RegionLabel::V);
        assert_eq!(tr[3].above, RegionLabel::I);
        // Coarse scan still finds every transition.
        assert_eq!(region_transitions(&p, 0.01, 3.0, 3).unwrap().len(), 4);
    }
}
