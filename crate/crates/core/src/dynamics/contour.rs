use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CouplingParams;
use crate::numerics::{integrate_path, QuadratureSpec};
use crate::spectrum::{first_sheet_poles, self_energy, SheetTag};

/// Rectangle offset and quadrature settings for [`survival_contour`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Distance of the horizontal edges from the real axis.
    pub eta: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            eta: 1e-3,
            quadrature: QuadratureSpec {
                abs_tol: 1e-8,
                rel_tol: 0.0,
                max_intervals: 200_000,
            },
        }
    }
}

/// Real-axis breakpoints of the bottom edge, increasing.
fn breakpoints(params: &CouplingParams, t: f64, eta: f64) -> Result<Vec<f64>> {
    let (inner, outer) = params.band_edges();
    let mut half_width = outer;
    let mut pts = vec![outer, -outer, inner, -inner];
    for (state, _) in first_sheet_poles(params)? {
        let x = state.energy.re;
        half_width = half_width.max(x.abs());
        pts.extend([x, x - 10.0 * eta, x + 10.0 * eta]);
    }
    let half_width = half_width + 1.0;
    pts.push(half_width);
    pts.push(-half_width);
    pts.retain(|x| x.abs() <= half_width);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    // Keep panels to about two oscillation periods of e^{-izt}.
    let max_len = if t > 0.0 { (4.0 * PI / t).min(0.5) } else { 0.5 };
    let mut out = Vec::with_capacity(pts.len() * 2);
    for w in pts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_len).ceil().max(1.0) as usize;
        for j in 0..pieces {
            out.push(w[0] + (w[1] - w[0]) * j as f64 / pieces as f64);
        }
    }
    out.push(*pts.last().expect("non-empty breakpoints"));
    Ok(out)
}

/// Survival amplitude `(1/2 pi i) \oint e^{-izt} / (z - Sigma(z)) dz` on a
/// counterclockwise rectangle enclosing the whole spectrum.
pub fn survival_contour(params: &CouplingParams, t: f64, spec: &ContourSpec) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Precondition(format!("t = {t} must be non-negative")));
    }
    if params.g() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let eta = spec.eta;
    let xs = breakpoints(params, t, eta)?;
    let mut path: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, -eta)).collect();
    path.extend(xs.iter().rev().map(|&x| Complex64::new(x, eta)));
    path.push(path[0]);

    let integrand = |z: Complex64| match self_energy(params, z, SheetTag::First) {
        Ok(s) => (-Complex64::i() * z * t).exp() / (z - s.sigma),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    };
    let result = integrate_path(integrand, &path, &spec.quadrature)?;
    if !(result.value.re.is_finite() && result.value.im.is_finite()) {
        return Err(Error::QuadratureFailed {
            error: f64::INFINITY,
            target: spec.quadrature.abs_tol,
            intervals: result.intervals,
        });
    }
    Ok(result.value / (2.0 * PI * Complex64::i()))
}
