use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{winding_factor, CouplingParams, Site, StateVector, WindingVariant};
use crate::spectrum::{classify_region, edge_state, first_sheet_poles, RegionLabel};

/// Sum of `residue * e^{-izt}` over the first-sheet poles.
pub fn pole_sum(params: &CouplingParams, t: f64) -> Result<Complex64> {
    Ok(first_sheet_poles(params)?
        .iter()
        .map(|(s, r)| r * (-Complex64::i() * s.energy * t).exp())
        .sum())
}

fn outer_gap(params: &CouplingParams) -> f64 {
    let g2 = params.g() * params.g();
    g2 - params.j1() * params.j_plus()
}

/// `X` of the outer-band-edge expansion; its sign is not fixed.
pub fn crossover_x(params: &CouplingParams) -> f64 {
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let jp = params.j_plus();
    let g2 = g * g;
    (g2 * g2 + 3.0 * j1 * j1 * jp * jp - 2.0 * g2 * jp * (2.0 * j1 + j2)) / jp
}

/// `T = |X| / (g^2 - j1 J+)^2`, separating the near zone from the far zone.
pub fn crossover_timescale(params: &CouplingParams) -> f64 {
    crossover_x(params).abs() / outer_gap(params).powi(2)
}

pub fn alpha_far_zone(params: &CouplingParams) -> f64 {
    let (j1, j2) = (params.j1(), params.j2());
    (j1 * j2 / (2.0 * params.j_plus())).sqrt() / outer_gap(params).powi(2)
}

pub fn alpha_near_zone(params: &CouplingParams) -> f64 {
    let (j1, j2) = (params.j1(), params.j2());
    (2.0 * j1 * j2).sqrt() / (params.j_plus().sqrt() * crossover_x(params))
}

/// Long-time outer band-edge contribution, `~ t^{-3/2} cos(J+ t + pi/4)`.
pub fn branch_far_zone(params: &CouplingParams, t: f64) -> Complex64 {
    let g2 = params.g() * params.g();
    let amp = -2.0 * g2 * alpha_far_zone(params) / PI.sqrt() * t.powf(-1.5);
    Complex64::new(amp * (params.j_plus() * t + FRAC_PI_4).cos(), 0.0)
}

/// Intermediate-time outer band-edge contribution, `~ t^{-1/2} sin(J+ t + pi/4)`.
pub fn branch_near_zone(params: &CouplingParams, t: f64) -> Complex64 {
    let g2 = params.g() * params.g();
    let amp = -2.0 * g2 * alpha_near_zone(params) / PI.sqrt() / t.sqrt();
    Complex64::new(amp * (params.j_plus() * t + FRAC_PI_4).sin(), 0.0)
}

/// Rabi frequency `g sqrt(j1^2 - j2^2) / j1` of the emitter and the edge state.
pub fn weak_coupling_frequency(params: &CouplingParams) -> f64 {
    let (j1, j2) = (params.j1(), params.j2());
    params.g() * (j1 * j1 - j2 * j2).max(0.0).sqrt() / j1
}

/// `cos(Wt)|q> - i sin(Wt)|phi_e>`: the emitter swapping with the edge state.
pub fn weak_coupling_evolution(params: &CouplingParams, t: f64, n_cells: usize) -> Result<StateVector> {
    let region = classify_region(params);
    if region != RegionLabel::V {
        return Err(Error::WrongRegion {
            expected: "V".into(),
            actual: region.to_string(),
        });
    }
    let omega = weak_coupling_frequency(params);
    let edge = edge_state(params, n_cells)?;
    let mut psi = StateVector::zeros(n_cells, true)?;
    psi.set_amp(Site::Emitter, Complex64::new((omega * t).cos(), 0.0))?;
    let s = Complex64::new(0.0, -(omega * t).sin());
    for n in 1..=n_cells {
        psi.set_amp(Site::A(n), s * edge.amp(Site::A(n)))?;
    }
    Ok(psi)
}

/// Where the band dispersion is linearized for the free-motion packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionPoint {
    /// Inflection point `cos k0 = -j2/j1` of the upper band.
    K0,
    /// Maximum of `|Phi(k)|` on `(0, pi)`.
    PhiPeak,
}

/// `Phi(k) = sin k / (w_{-k} w~_k)`, the continuum weight of the B-site amplitude.
pub fn phi(params: &CouplingParams, k: f64) -> Complex64 {
    let w_minus = winding_factor(params, -k, WindingVariant::Bare);
    let w_tilde = winding_factor(params, k, WindingVariant::Tilde);
    k.sin() / (w_minus * w_tilde)
}

/// Closed form of `Phi` at the inflection point.
pub fn phi_at_k0(params: &CouplingParams) -> Complex64 {
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let g2 = g * g;
    j1 / Complex64::new((j1 * j1 - g2) * (j1 * j1 - j2 * j2).sqrt(), -g2 * j2)
}

/// Linearized wave packet of the continuum part of `<n,B|e^{-iHt}|q>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeMotion {
    pub k: f64,
    pub energy: f64,
    /// `dE/dk` at the expansion point.
    pub slope: f64,
    pub phi: Complex64,
    g: f64,
    j2: f64,
}

fn bracket(x: f64, sign: f64) -> Complex64 {
    // (e^{i sign pi x} - 1) / x with its x -> 0 limit.
    if x.abs() < 1e-8 {
        return Complex64::new(0.0, sign * PI);
    }
    (Complex64::from_polar(1.0, sign * PI * x) - 1.0) / x
}

impl FreeMotion {
    pub fn new(params: &CouplingParams, point: ExpansionPoint) -> Result<Self> {
        let (j1, j2) = (params.j1(), params.j2());
        if j1 <= j2 {
            return Err(Error::Precondition("free motion needs j1 > j2".into()));
        }
        let band = |k: f64| (j1 * j1 + j2 * j2 + 2.0 * j1 * j2 * k.cos()).sqrt();
        let (k, phi_k) = match point {
            ExpansionPoint::K0 => ((-j2 / j1).acos(), phi_at_k0(params)),
            ExpansionPoint::PhiPeak => {
                let kp = phi_peak(params);
                (kp, phi(params, kp))
            }
        };
        let energy = band(k);
        Ok(Self {
            k,
            energy,
            slope: -j1 * j2 * k.sin() / energy,
            phi: phi_k,
            g: params.g(),
            j2,
        })
    }

    /// Speed of the packet front; the sign of `dE/dk` is absorbed.
    pub fn group_velocity(&self) -> f64 {
        -self.slope
    }

    /// `A_{c,+} + A_{c,-}` at cell `n` and time `t`.
    pub fn amplitude(&self, n: usize, t: f64) -> Complex64 {
        let n = n as f64;
        let pref = -self.g * self.j2 * self.phi / (2.0 * PI);
        [1.0, -1.0]
            .iter()
            .map(|&s| {
                let carrier = Complex64::from_polar(1.0, self.k * n + s * self.energy * t)
                    * Complex64::from_polar(1.0, -self.k * (n + s * self.slope * t));
                let b = bracket(n + s * self.slope * t, 1.0) + bracket(n - s * self.slope * t, -1.0);
                pref * carrier * b
            })
            .sum()
    }
}

fn phi_peak(params: &CouplingParams) -> f64 {
    let n = 4096;
    let h = PI / n as f64;
    let mag = |k: f64| phi(params, k).norm();
    let best = (1..n).max_by(|&a, &b| mag(a as f64 * h).total_cmp(&mag(b as f64 * h))).unwrap_or(1);
    // Golden-section refinement inside the bracketing samples.
    let (mut a, mut b) = ((best - 1) as f64 * h, (best + 1) as f64 * h);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if mag(c) > mag(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Free-motion amplitude at cell `n`, linearized at the inflection point.
pub fn free_motion_amplitude(params: &CouplingParams, n: usize, t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("t = {t} must be positive")));
    }
    Ok(FreeMotion::new(params, ExpansionPoint::K0)?.amplitude(n, t))
}

/// Rough condition `g >= j1 - j2` for the free-motion packet to be visible.
pub fn free_motion_significant(params: &CouplingParams) -> bool {
    params.g() >= params.j1() - params.j2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(j1: f64, j2: f64, g: f64) -> CouplingParams {
        CouplingParams::new(j1, j2, g).unwrap()
    }

    #[test]
    fn pole_sums() {
        let q = p(1.0, 1.5, 2.5);
        let a0 = pole_sum(&q, 0.0).unwrap();
        assert!((a0.re - (1.0 / 6.0 + 9.0 / 14.0)).abs() < 1e-10);
        let iii = p(1.0, 1.5, 0.5);
        let expect = 1.25 / 1.5;
        for t in [0.0, 3.0, 40.0] {
            assert!((pole_sum(&iii, t).unwrap() - expect).norm() < 1e-12);
        }
        let uniform = p(1.0, 1.0, 2.0);
        assert_eq!(first_sheet_poles(&uniform).unwrap().len(), 2);
    }

    #[test]
    fn branch_envelopes() {
        let q = p(2.0 / 3.0, 1.0, 0.5);
        let env = |f: fn(&CouplingParams, f64) -> Complex64, t: f64| {
            let period = 2.0 * PI / q.j_plus();
            // Compare at equal phase.
            let t = (t / period).round() * period;
            (f(&q, t).re, t)
        };
        let (a, ta) = env(branch_far_zone, 100.0);
        let (b, tb) = env(branch_far_zone, 400.0);
        assert!((b / a - (ta / tb).powf(1.5)).abs() < 1e-12);
        let (a, ta) = env(branch_near_zone, 100.0);
        let (b, tb) = env(branch_near_zone, 400.0);
        assert!((b / a - (ta / tb).sqrt()).abs() < 1e-12);

        let small = branch_far_zone(&p(1.0, 1.5, 1e-3), 50.0).norm();
        let smaller = branch_far_zone(&p(1.0, 1.5, 5e-4), 50.0).norm();
        assert!((small / smaller - 4.0).abs() < 1e-4);
    }

    #[test]
    fn weak_coupling() {
        let q = p(1.5, 1.0, 0.1);
        assert!((weak_coupling_frequency(&q) - 0.0745356).abs() < 1e-7);
        let psi = weak_coupling_evolution(&q, 0.0, 64).unwrap();
        assert!((psi.amp(Site::Emitter) - 1.0).norm() < 1e-15);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(weak_coupling_evolution(&p(1.5, 1.0, 1.0), 1.0, 64).is_err());
    }

    #[test]
    fn free_motion_point() {
        let q = p(1.1, 1.0, 0.1);
        let fm = FreeMotion::new(&q, ExpansionPoint::K0).unwrap();
        assert!((fm.group_velocity() - 1.0).abs() < 1e-12);
        assert!((fm.energy - 0.21f64.sqrt()).abs() < 1e-12);
        assert!((phi(&q, fm.k) - phi_at_k0(&q)).norm() < 1e-12);
        let peak = FreeMotion::new(&q, ExpansionPoint::PhiPeak).unwrap();
        assert!(peak.phi.norm() >= fm.phi.norm());
        assert!(FreeMotion::new(&p(1.0, 1.5, 0.1), ExpansionPoint::K0).is_err());
    }

    #[test]
    fn free_motion_scales_with_g() {
        let a = free_motion_amplitude(&p(1.1, 1.0, 0.01), 30, 30.0).unwrap().norm();
        let b = free_motion_amplitude(&p(1.1, 1.0, 0.02), 30, 30.0).unwrap().norm();
        assert!((b / a - 2.0).abs() < 0.02);
    }
}
