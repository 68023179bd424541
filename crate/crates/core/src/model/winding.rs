use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::CouplingParams;
use crate::error::{Error, Result};

/// Default number of k samples for [`winding_number`].
pub const DEFAULT_WINDING_SAMPLES: usize = 4096;

/// Curves closer than this to the origin are treated as a closed gap.
pub const GAP_CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Band {
    Upper,
    Lower,
}

impl Band {
    pub fn sign(self) -> f64 {
        match self {
            Band::Upper => 1.0,
            Band::Lower => -1.0,
        }
    }
}

/// Continuum band energy `±|j2 + j1 e^{ik}|`.
pub fn dispersion(params: &CouplingParams, k: f64, band: Band) -> f64 {
    let (j1, j2) = (params.j1(), params.j2());
    band.sign() * (j1 * j1 + j2 * j2 + 2.0 * j1 * j2 * k.cos()).max(0.0).sqrt()
}

/// Which winding factor to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WindingVariant {
    /// `w_k = j2 + j1 e^{ik}` of the bare chain (A-sublattice factor).
    Bare,
    /// `w~_k = j2 + j1~ e^{ik}` with the emitter-renormalized `j1~`.
    Tilde,
    /// `e^{ik} w_{-k} = j1 + j2 e^{ik}`: the inverted factor that multiplies
    /// the B sublattice once the emitter is attached.
    BSite,
}

pub fn winding_factor(params: &CouplingParams, k: f64, variant: WindingVariant) -> Complex64 {
    let phase = Complex64::from_polar(1.0, k);
    match variant {
        WindingVariant::Bare => params.j2() + params.j1() * phase,
        WindingVariant::Tilde => params.j2() + params.j1_tilde() * phase,
        WindingVariant::BSite => params.j1() + params.j2() * phase,
    }
}

/// Net number of turns of a closed curve `k -> curve(k)`, `k in [-pi, pi]`,
/// about the origin, from the summed phase increments between samples.
pub fn winding_number<F>(curve: F, n_samples: usize) -> Result<i32>
where
    F: Fn(f64) -> Complex64,
{
    let n = n_samples.max(8);
    let mut prev = curve(-PI);
    check_off_origin(prev, -PI)?;
    let first = prev;
    let mut total = 0.0;
    for i in 1..=n {
        let k = -PI + 2.0 * PI * i as f64 / n as f64;
        let cur = if i == n { first } else { curve(k) };
        check_off_origin(cur, k)?;
        total += (cur / prev).arg();
        prev = cur;
    }
    Ok((total / (2.0 * PI)).round() as i32)
}

fn check_off_origin(c: Complex64, k: f64) -> Result<()> {
    let m = c.norm();
    if m < GAP_CLOSURE_TOL {
        Err(Error::DegenerateCurve { k, modulus: m })
    } else {
        Ok(())
    }
}

/// Winding number of one of the model's factors with the default sampling.
pub fn winding_of(params: &CouplingParams, variant: WindingVariant) -> Result<i32> {
    winding_number(
        |k| winding_factor(params, k, variant),
        DEFAULT_WINDING_SAMPLES,
    )
}

/// `(k, w(k))` samples of a factor over `[-pi, pi]` inclusive.
pub fn sample_curve(
    params: &CouplingParams,
    variant: WindingVariant,
    n_samples: usize,
) -> Vec<(f64, Complex64)> {
    let n = n_samples.max(2);
    (0..=n)
        .map(|i| {
            let k = -PI + 2.0 * PI * i as f64 / n as f64;
            (k, winding_factor(params, k, variant))
        })
        .collect()
}
