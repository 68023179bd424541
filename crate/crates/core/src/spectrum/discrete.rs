use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::region::{classify_region, BOUNDARY_TOL};
use super::self_energy::{self_energy, self_energy_derivative, zero_mode_on_sheet, SheetTag};
use crate::error::{Error, Result};
use crate::model::CouplingParams;

/// Root-residual tolerance every returned energy satisfies on its sheet.
pub const ROOT_TOL: f64 = 1e-10;
/// Inputs to [`residue_at`] farther than this from a pole are rejected.
pub const POLE_TOL: f64 = 1e-8;
const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    Bound,
    AntiBound,
    Resonance,
    AntiResonance,
    ZeroModeBound,
    ZeroModeAntiBound,
}

impl StateKind {
    pub fn is_zero_mode(self) -> bool {
        matches!(self, StateKind::ZeroModeBound | StateKind::ZeroModeAntiBound)
    }
}

/// A generalized eigenvalue of the emitter resolvent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteState {
    pub energy: Complex64,
    pub kind: StateKind,
    pub sheet: SheetTag,
    /// Shared complex wavevector of the `z_+-` pair; `None` for the zero mode.
    pub wavevector: Option<Complex64>,
}

fn check_singular(params: &CouplingParams) -> Result<()> {
    if (params.g() - params.j1()).abs() <= BOUNDARY_TOL * params.j1().max(1.0) {
        return Err(Error::SingularCoupling);
    }
    Ok(())
}

/// Closed-form `z_+` (principal root; purely imaginary with positive part in region III).
pub fn z_plus_closed_form(params: &CouplingParams) -> Result<Complex64> {
    check_singular(params)?;
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let ratio = (g * g - (j1 * j1 - j2 * j2)) / (g * g - j1 * j1);
    Ok(g * Complex64::new(ratio, 0.0).sqrt())
}

/// Wavevector `k = -i ln(j1 j2 / (g^2 - j1^2))` shared by `z_+-`.
pub fn pair_wavevector(params: &CouplingParams) -> Result<Complex64> {
    check_singular(params)?;
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let x = Complex64::new(j1 * j2 / (g * g - j1 * j1), 0.0);
    Ok(-Complex64::i() * x.ln())
}

fn root_residual(params: &CouplingParams, z: Complex64, sheet: SheetTag) -> Result<f64> {
    Ok((z - self_energy(params, z, sheet)?.sigma).norm())
}

/// Newton iteration on `z - Sigma(z)` restricted to one sheet.
pub fn polish_root(params: &CouplingParams, seed: Complex64, sheet: SheetTag) -> Result<Complex64> {
    let scale = 1.0 + seed.norm();
    let mut z = seed;
    let mut best = (root_residual(params, z, sheet)?, z);
    for _ in 0..NEWTON_MAX_ITER {
        if best.0 < NEWTON_TOL * scale {
            break;
        }
        let f = z - self_energy(params, z, sheet)?.sigma;
        let df = Complex64::new(1.0, 0.0) - self_energy_derivative(params, z, sheet)?;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        z -= step;
        // Keep real roots on the real axis.
        if seed.im == 0.0 {
            z.im = 0.0;
        }
        if seed.re == 0.0 {
            z.re = 0.0;
        }
        let r = root_residual(params, z, sheet)?;
        if r < best.0 {
            best = (r, z);
        }
        if step.norm() < 1e-16 * scale {
            break;
        }
    }
    if best.0 > ROOT_TOL {
        return Err(Error::NewtonFailed { seed });
    }
    Ok(best.1)
}

/// All discrete generalized eigenvalues: the zero mode (when the gap is open)
/// and the `z_+-` pair, each tagged with its kind and sheet.
///
/// At `g = 0` only the decoupled emitter level at zero energy is returned.
pub fn discrete_eigenvalues(params: &CouplingParams) -> Result<Vec<DiscreteState>> {
    check_singular(params)?;
    if params.g() == 0.0 {
        return Ok(vec![DiscreteState {
            energy: Complex64::default(),
            kind: StateKind::ZeroModeBound,
            sheet: SheetTag::First,
            wavevector: None,
        }]);
    }
    let mut out = Vec::with_capacity(3);
    let jm = params.j_minus();
    if jm < 0.0 {
        out.push(DiscreteState {
            energy: Complex64::default(),
            kind: StateKind::ZeroModeBound,
            sheet: SheetTag::First,
            wavevector: None,
        });
    } else if jm > 0.0 {
        out.push(DiscreteState {
            energy: Complex64::default(),
            kind: StateKind::ZeroModeAntiBound,
            sheet: SheetTag::Second,
            wavevector: None,
        });
    }

    let seed = z_plus_closed_form(params)?;
    let k = pair_wavevector(params)?;
    let boundary = classify_region(params).is_boundary();
    let real = seed.im == 0.0;
    let (kind_plus, kind_minus, sheet) = if real {
        if k.im > 0.0 {
            (StateKind::Bound, StateKind::Bound, SheetTag::First)
        } else {
            (StateKind::AntiBound, StateKind::AntiBound, SheetTag::Second)
        }
    } else {
        (StateKind::AntiResonance, StateKind::Resonance, SheetTag::Second)
    };
    let z_plus = if boundary || seed.norm() < 1e-9 {
        // Limits at region boundaries may sit on a branch point; keep the closed form.
        seed
    } else {
        polish_root(params, seed, sheet)?
    };
    out.push(DiscreteState {
        energy: z_plus,
        kind: kind_plus,
        sheet,
        wavevector: Some(k),
    });
    out.push(DiscreteState {
        energy: -z_plus,
        kind: kind_minus,
        sheet,
        wavevector: Some(k),
    });
    Ok(out)
}

/// Residue of `1 / (z - Sigma(z))` at a pole on the given sheet.
pub fn residue_at(params: &CouplingParams, pole: Complex64, sheet: SheetTag) -> Result<Complex64> {
    let residual = if pole == Complex64::default() {
        if zero_mode_on_sheet(params, sheet) {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        root_residual(params, pole, sheet)?
    };
    if residual > POLE_TOL {
        return Err(Error::NotAPole {
            z: pole,
            sheet: sheet.to_string(),
            residual,
        });
    }
    let d = self_energy_derivative(params, pole, sheet)?;
    Ok(1.0 / (Complex64::new(1.0, 0.0) - d))
}

/// First-sheet poles with their residues (the bound-state content of `|q>`).
pub fn first_sheet_poles(params: &CouplingParams) -> Result<Vec<(DiscreteState, Complex64)>> {
    let mut out = Vec::new();
    for s in discrete_eigenvalues(params)? {
        if s.sheet == SheetTag::First {
            let r = residue_at(params, s.energy, s.sheet)?;
            out.push((s, r));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRule {
    pub pole_weight: f64,
    pub band_weight: f64,
}

impl SumRule {
    pub fn total(&self) -> f64 {
        self.pole_weight + self.band_weight
    }
}

/// Emitter spectral density `-(1/pi) Im G(E + i0)` on the real axis.
pub fn spectral_density(params: &CouplingParams, energy: f64) -> Result<f64> {
    let z = Complex64::new(energy, 0.0);
    let sigma = self_energy(params, z, SheetTag::First)?.sigma;
    Ok(-(1.0 / (z - sigma)).im / PI)
}

/// Weight of the continuum, `integral of the spectral density over both bands`.
///
/// Each band is mapped by `E = c + h cos(theta)` so the square-root edges
/// become smooth; the trapezoid rule in `theta` then converges quickly.
pub fn band_weight(params: &CouplingParams, points_per_band: usize) -> Result<f64> {
    if points_per_band < 2 {
        return Err(Error::Precondition("need at least two quadrature points per band".into()));
    }
    let (inner, outer) = params.band_edges();
    let c = 0.5 * (outer + inner);
    let h = 0.5 * (outer - inner);
    let dtheta = PI / points_per_band as f64;
    let mut total = 0.0;
    // Endpoints carry sin(theta) = 0 and are skipped.
    for i in 1..points_per_band {
        let theta = i as f64 * dtheta;
        let w = h * theta.sin() * dtheta;
        let e = h * theta.cos();
        total += w * (spectral_density(params, c + e)? + spectral_density(params, -c - e)?);
    }
    Ok(total)
}

/// Pole residues plus continuum weight; should total one.
pub fn sum_rule(params: &CouplingParams, points_per_band: usize) -> Result<SumRule> {
    let pole_weight = first_sheet_poles(params)?.iter().map(|(_, r)| r.re).sum();
    Ok(SumRule {
        pole_weight,
        band_weight: band_weight(params, points_per_band)?,
    })
}
