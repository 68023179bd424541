use std::f64::consts::{FRAC_1_SQRT_2, LN_10, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::discrete::z_plus_closed_form;
use super::region::{classify_region, RegionLabel};
use crate::error::{Error, Result};
use crate::model::{winding_factor, Band, CouplingParams, Site, StateVector, WindingVariant};

/// Minimum truncation used for closed-form eigenstates.
pub const MIN_CELLS: usize = 64;
/// Target tail weight `e^{-n/xi}` for [`cells_for_length`].
pub const TAIL_DIGITS: f64 = 14.0;
/// Excluded neighbourhood of the band edges `k = 0, pi`.
pub const EDGE_EXCLUSION: f64 = 1e-6;

/// Cells needed so that `e^{-n/xi} < 1e-14`, never fewer than [`MIN_CELLS`].
pub fn cells_for_length(xi: f64) -> usize {
    let n = (TAIL_DIGITS * LN_10 * xi).ceil();
    if n.is_finite() && n > MIN_CELLS as f64 {
        n as usize
    } else {
        MIN_CELLS
    }
}

/// Localization data of the bound pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    /// Ratio of B to A amplitude within a cell.
    pub r: f64,
    /// Exponential localization length in cells.
    pub xi: f64,
}

/// Sublattice ratio `r`, defined where the bound-pair energy is real and nonzero.
pub fn sublattice_ratio(params: &CouplingParams) -> Option<f64> {
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let radicand = (j1 * j1 - j2 * j2 - g * g) * (j1 * j1 - g * g);
    if radicand <= 0.0 || g == j1 {
        return None;
    }
    Some((j1 - g).signum() * g * j2 / radicand.sqrt())
}

/// Localization length `1 / ln|J1~ / j2|`; negative when the pair is not normalizable.
pub fn localization_length(params: &CouplingParams) -> Option<f64> {
    let ratio = (params.j1_tilde() / params.j2()).abs();
    if ratio == 1.0 || ratio == 0.0 {
        return None;
    }
    Some(1.0 / ratio.ln())
}

/// `r` and `xi` in the regions where the bound pair exists.
pub fn localization(params: &CouplingParams) -> Result<Localization> {
    require_bound_pair(params)?;
    match (sublattice_ratio(params), localization_length(params)) {
        (Some(r), Some(xi)) => Ok(Localization { r, xi }),
        _ => Err(Error::Delocalized {
            region: classify_region(params).to_string(),
        }),
    }
}

/// Truncation suited to the bound pair of these parameters.
pub fn recommended_cells(params: &CouplingParams) -> usize {
    match localization_length(params) {
        Some(xi) if xi > 0.0 && classify_region(params).has_bound_pair() => cells_for_length(xi),
        _ => MIN_CELLS,
    }
}

fn require_bound_pair(params: &CouplingParams) -> Result<()> {
    let region = classify_region(params);
    if region.has_bound_pair() {
        Ok(())
    } else {
        Err(Error::Delocalized {
            region: region.to_string(),
        })
    }
}

fn check_cells(n_cells: usize) -> Result<()> {
    if n_cells == 0 {
        Err(Error::InvalidCells(n_cells))
    } else {
        Ok(())
    }
}

/// Zero-energy edge state of the bare chain, living on the A sublattice.
pub fn edge_state(params: &CouplingParams, n_cells: usize) -> Result<StateVector> {
    check_cells(n_cells)?;
    let (j1, j2) = (params.j1(), params.j2());
    if j1 <= j2 {
        return Err(Error::NoEdgeState { j1, j2 });
    }
    let mut psi = StateVector::zeros(n_cells, false)?;
    let ratio = -j2 / j1;
    let mut a = (j1 * j1 - j2 * j2).sqrt() / j1;
    for n in 1..=n_cells {
        psi.set_amp(Site::A(n), Complex64::new(a, 0.0))?;
        a *= ratio;
    }
    Ok(psi)
}

/// Squared emitter weight of the zero mode for `j1 < j2`.
pub fn zero_mode_weight(params: &CouplingParams) -> Result<f64> {
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    if j1 >= j2 {
        return Err(Error::ZeroModeNotNormalizable { j1, j2 });
    }
    let d = j2 * j2 - j1 * j1;
    Ok(d / (d + g * g))
}

/// Zero-energy eigenstate of the coupled system, on the emitter and B sublattice.
pub fn zero_mode(params: &CouplingParams, n_cells: usize) -> Result<StateVector> {
    check_cells(n_cells)?;
    let q = zero_mode_weight(params)?.sqrt();
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let mut psi = StateVector::zeros(n_cells, true)?;
    psi.set_amp(Site::Emitter, Complex64::new(q, 0.0))?;
    let ratio = -j1 / j2;
    let mut b = -q * g / j2;
    for n in 1..=n_cells {
        psi.set_amp(Site::B(n), Complex64::new(b, 0.0))?;
        b *= ratio;
    }
    Ok(psi)
}

/// Emitter amplitude of the normalized bound pair (both members share it).
pub fn bound_pair_emitter_amplitude(params: &CouplingParams) -> Result<f64> {
    require_bound_pair(params)?;
    let e = z_plus_closed_form(params)?.re;
    let g = params.g();
    let r = (g * g - e * e) / (params.j2() * e);
    let lambda = params.j2() / params.j1_tilde();
    let x = e / g;
    Ok((1.0 / (1.0 + x * x * (1.0 + r * r) / (1.0 - lambda * lambda))).sqrt())
}

/// Normalized bound pair `(psi_+, psi_-)` at energies `+-E` with `E = z_+ > 0`.
pub fn bound_pair_states(params: &CouplingParams, n_cells: usize) -> Result<(StateVector, StateVector)> {
    check_cells(n_cells)?;
    let q = bound_pair_emitter_amplitude(params)?;
    let e = z_plus_closed_form(params)?.re;
    let (j2, g) = (params.j2(), params.g());
    let r = (g * g - e * e) / (j2 * e);
    let lambda = -j2 / params.j1_tilde();
    let mut plus = StateVector::zeros(n_cells, true)?;
    let mut minus = StateVector::zeros(n_cells, true)?;
    plus.set_amp(Site::Emitter, Complex64::new(q, 0.0))?;
    minus.set_amp(Site::Emitter, Complex64::new(q, 0.0))?;
    let mut c = q * e / g;
    for n in 1..=n_cells {
        plus.set_amp(Site::A(n), Complex64::new(c, 0.0))?;
        minus.set_amp(Site::A(n), Complex64::new(-c, 0.0))?;
        plus.set_amp(Site::B(n), Complex64::new(-r * c, 0.0))?;
        minus.set_amp(Site::B(n), Complex64::new(-r * c, 0.0))?;
        c *= lambda;
    }
    Ok((plus, minus))
}

/// `psi_s = (psi_+ + psi_-)/sqrt 2` (emitter and B) and
/// `psi_a = (psi_+ - psi_-)/sqrt 2` (A only).
pub fn sym_antisym_states(params: &CouplingParams, n_cells: usize) -> Result<(StateVector, StateVector)> {
    let (plus, minus) = bound_pair_states(params, n_cells)?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let s = plus.combine(h, &minus, h)?;
    let a = plus.combine(h, &minus, -h)?;
    Ok((s, a))
}

/// Unnormalized real scattering state at wavevector `k` in the given band.
///
/// Without the emitter this is the standing wave of the bare half-chain; with
/// it, the phase is fixed by the boundary condition at the first cell.
pub fn continuum_state(
    params: &CouplingParams,
    k: f64,
    band: Band,
    n_cells: usize,
    with_emitter: bool,
) -> Result<StateVector> {
    check_cells(n_cells)?;
    if !(EDGE_EXCLUSION..=PI - EDGE_EXCLUSION).contains(&k) {
        return Err(Error::IllConditioned(format!(
            "k = {k} is within {EDGE_EXCLUSION} of a band edge"
        )));
    }
    let s = band.sign();
    let w = winding_factor(params, k, WindingVariant::Bare);
    let e = s * w.norm();
    let mut psi = StateVector::zeros(n_cells, with_emitter)?;
    let phase = |n: usize| Complex64::from_polar(1.0, k * n as f64);

    if !with_emitter {
        let f = w.conj() / w.norm();
        for n in 1..=n_cells {
            psi.set_amp(Site::A(n), Complex64::new((f * phase(n)).im, 0.0))?;
            psi.set_amp(Site::B(n), Complex64::new(s * (k * n as f64).sin(), 0.0))?;
        }
        return Ok(psi);
    }

    let wt = winding_factor(params, k, WindingVariant::Tilde);
    if wt.norm() < 1e-12 {
        return Err(Error::IllConditioned(format!("|w~_k| vanishes at k = {k}")));
    }
    let gamma = wt.conj() / wt.norm();
    let beta = gamma * w / w.norm();
    let a = |n: usize| (gamma * phase(n)).im;
    let b = |n: usize| s * (beta * phase(n)).im;
    for n in 2..=n_cells {
        psi.set_amp(Site::A(n), Complex64::new(a(n), 0.0))?;
    }
    for n in 1..=n_cells {
        psi.set_amp(Site::B(n), Complex64::new(b(n), 0.0))?;
    }
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    let a1 = (e * b(1) - j1 * a(2)) / j2;
    psi.set_amp(Site::A(1), Complex64::new(a1, 0.0))?;
    psi.set_amp(Site::Emitter, Complex64::new(g * a1 / e, 0.0))?;
    Ok(psi)
}

/// Whether the bound pair exists, as decided by the region classification.
pub fn has_bound_pair(params: &CouplingParams) -> bool {
    matches!(classify_region(params), RegionLabel::I | RegionLabel::V)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    fn p(j1: f64, j2: f64, g: f64) -> CouplingParams {
        CouplingParams::new(j1, j2, g).unwrap()
    }

    fn residual(params: &CouplingParams, psi: &StateVector, e: f64) -> f64 {
        let h = build_hamiltonian(params, psi.n_cells(), psi.with_emitter()).unwrap();
        h.residual(psi, Complex64::new(e, 0.0)).unwrap()
    }

    #[test]
    fn edge_state_shape() {
        let q = p(1.5, 1.0, 0.0);
        let psi = edge_state(&q, 200).unwrap();
        assert!((psi.amp(Site::A(1)).re - 0.745356).abs() < 1e-6);
        assert!((1..=200).all(|n| psi.amp(Site::B(n)) == Complex64::default()));
        assert!(residual(&q, &psi, 0.0) < 1e-10);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(edge_state(&p(1.0, 1.5, 0.0), 10).is_err());
    }

    #[test]
    fn zero_mode_shape() {
        let q = p(1.0, 1.5, 2.5);
        let psi = zero_mode(&q, 100).unwrap();
        assert!((psi.amp(Site::Emitter).re.powi(2) - 1.0 / 6.0).abs() < 1e-12);
        assert!((1..=100).all(|n| psi.amp(Site::A(n)) == Complex64::default()));
        assert!(residual(&q, &psi, 0.0) < 1e-10);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(zero_mode(&p(1.5, 1.0, 0.3), 10), Err(Error::ZeroModeNotNormalizable { .. })));
    }

    #[test]
    fn localization_values() {
        let l = localization(&p(1.5, 1.0, 0.1)).unwrap();
        assert!((l.r - 0.060002).abs() < 2e-6);
        assert!((l.xi - 2.49370).abs() < 1e-5);
        let w = p(1.5, 1.0, 0.75f64.sqrt());
        assert!((sublattice_ratio(&w).unwrap() - 1.0).abs() < 1e-10);
        let tiny = p(1.5, 1.0, 1e-6);
        let slope = 1.0 / (1.25f64 * 2.25).sqrt();
        assert!((sublattice_ratio(&tiny).unwrap() / 1e-6 - slope).abs() < 1e-6);
    }

    #[test]
    fn bound_pair_is_an_orthonormal_eigenpair() {
        for q in [p(1.5, 1.0, 0.1), p(1.0, 1.5, 2.5), p(1.5, 1.0, 0.5), p(2.0 / 3.0, 1.0, 2.5)] {
            let n = recommended_cells(&q);
            let (plus, minus) = bound_pair_states(&q, n).unwrap();
            let e = z_plus_closed_form(&q).unwrap().re;
            assert!(residual(&q, &plus, e) < 1e-8);
            assert!(residual(&q, &minus, -e) < 1e-8);
            assert!((plus.norm() - 1.0).abs() < 1e-12);
            assert!((minus.norm() - 1.0).abs() < 1e-12);
            assert!(plus.inner(&minus).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn strong_coupling_weight_and_sign() {
        let q = p(1.0, 1.5, 2.5);
        let a = bound_pair_emitter_amplitude(&q).unwrap();
        assert!((a * a - 9.0 / 28.0).abs() < 1e-12);
        let (plus, _) = bound_pair_states(&q, 64).unwrap();
        // J1~ < 0: no alternation between cells.
        assert!((1..10).all(|n| plus.amp(Site::A(n)).re * plus.amp(Site::A(n + 1)).re > 0.0));
        let (plus, _) = bound_pair_states(&p(1.5, 1.0, 0.1), 64).unwrap();
        assert!((1..10).all(|n| plus.amp(Site::A(n)).re * plus.amp(Site::A(n + 1)).re < 0.0));
    }

    #[test]
    fn weak_coupling_hybridization() {
        let q = p(1.5, 1.0, 0.01);
        let n = recommended_cells(&q);
        let (plus, minus) = bound_pair_states(&q, n).unwrap();
        let edge = edge_state(&q, n).unwrap();
        let mut emitter = StateVector::basis(n, true, Site::Emitter).unwrap();
        let mut phi = StateVector::zeros(n, true).unwrap();
        for m in 1..=n {
            phi.set_amp(Site::A(m), edge.amp(Site::A(m))).unwrap();
        }
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let target_plus = emitter.combine(h, &phi, h).unwrap();
        emitter = emitter.combine(h, &phi, -h).unwrap();
        assert!(plus.inner(&target_plus).unwrap().norm() > 0.9999);
        assert!(minus.inner(&emitter).unwrap().norm() > 0.9999);
    }

    #[test]
    fn sym_antisym_sublattices() {
        let q = p(1.5, 1.0, 0.1);
        let n = recommended_cells(&q);
        let (s, a) = sym_antisym_states(&q, n).unwrap();
        for m in 1..=n {
            assert!(s.amp(Site::A(m)).norm() < 1e-12);
            assert!(a.amp(Site::B(m)).norm() < 1e-12);
        }
        assert!(a.amp(Site::Emitter).norm() < 1e-12);
        let h = build_hamiltonian(&q, n, true).unwrap();
        let e = z_plus_closed_form(&q).unwrap();
        let hs = h.apply(&s).unwrap();
        assert!(hs.distance(&a.clone().scaled(e)).unwrap() < 1e-8);
        let ha = h.apply(&a).unwrap();
        assert!(ha.distance(&s.clone().scaled(e)).unwrap() < 1e-8);
    }

    #[test]
    fn delocalized_regions_rejected() {
        for q in [p(1.5, 1.0, 1.0), p(1.5, 1.0, 1.25), p(1.0, 1.5, 1.2), p(1.5, 1.0, 0.75f64.sqrt())] {
            assert!(matches!(bound_pair_states(&q, 64), Err(Error::Delocalized { .. })));
        }
    }

    fn interior_residual(params: &CouplingParams, psi: &StateVector, e: f64) -> f64 {
        let h = build_hamiltonian(params, psi.n_cells(), psi.with_emitter()).unwrap();
        let hp = h.apply(psi).unwrap();
        let keep = psi.len() - 4;
        let r: f64 = (0..keep)
            .map(|i| (hp.amps()[i] - e * psi.amps()[i]).norm_sqr())
            .sum();
        r.sqrt()
    }

    #[test]
    fn continuum_states_solve_the_bulk() {
        for q in [p(1.5, 1.0, 0.1), p(1.0, 1.5, 2.5), p(1.5, 1.0, 1.25)] {
            for &band in &[Band::Upper, Band::Lower] {
                for &k in &[0.3, 1.0, 2.5] {
                    for &em in &[false, true] {
                        let psi = continuum_state(&q, k, band, 400, em).unwrap();
                        let e = crate::model::dispersion(&q, k, band);
                        assert!(interior_residual(&q, &psi, e) < 1e-8 * psi.norm());
                    }
                }
            }
        }
    }

    #[test]
    fn continuum_boundary_identity() {
        let q = p(1.5, 1.0, 0.4);
        let k = 1.1;
        let ep = crate::model::dispersion(&q, k, Band::Upper);
        let (j1, j2, g) = (1.5, 1.0, 0.4);
        let expect = j1 / (ep - j2 * j2 / (ep - g * g / ep));
        for (band, s) in [(Band::Upper, 1.0), (Band::Lower, -1.0)] {
            let psi = continuum_state(&q, k, band, 20, true).unwrap();
            let ratio = psi.amp(Site::B(1)).re / psi.amp(Site::A(2)).re;
            assert!((ratio - s * expect).abs() < 1e-10);
        }
    }

    #[test]
    fn continuum_reduces_to_bare_chain() {
        let q = p(1.5, 1.0, 0.0);
        let bare = continuum_state(&q, 0.7, Band::Upper, 30, false).unwrap();
        let with = continuum_state(&q, 0.7, Band::Upper, 30, true).unwrap();
        for n in 1..=30 {
            assert!((bare.amp(Site::A(n)) - with.amp(Site::A(n))).norm() < 1e-12);
            assert!((bare.amp(Site::B(n)) - with.amp(Site::B(n))).norm() < 1e-12);
        }
        assert!(continuum_state(&q, 1e-8, Band::Upper, 30, true).is_err());
        assert!(continuum_state(&q, PI, Band::Upper, 30, true).is_err());
    }
}
