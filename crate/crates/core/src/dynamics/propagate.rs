use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::model::{CouplingParams, HamiltonianMatrix, Site, StateVector};
use crate::numerics::{Accumulate, TridiagonalEigen};

/// Extra cells beyond the light cone required by [`check_reflection_guard`].
pub const GUARD_MARGIN: usize = 50;
/// Largest probability allowed in the last 10% of the chain.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Smallest truncation that keeps reflections off the region of interest up to `t_end`.
pub fn required_cells(params: &CouplingParams, t_end: f64) -> usize {
    (params.j_plus() * t_end).ceil() as usize + GUARD_MARGIN
}

pub fn check_reflection_guard(params: &CouplingParams, n_cells: usize, t_end: f64) -> Result<()> {
    let required = required_cells(params, t_end);
    if n_cells < required {
        return Err(Error::ReflectionGuard {
            given: n_cells,
            required,
            t_end,
        });
    }
    Ok(())
}

/// Probability carried by the last 10% of the cells.
pub fn tail_probability(psi: &StateVector) -> f64 {
    let n = psi.n_cells();
    let first = n - (n / 10).max(1) + 1;
    (first..=n)
        .map(|c| psi.amp(Site::A(c)).norm_sqr() + psi.amp(Site::B(c)).norm_sqr())
        .sum()
}

fn phases(values: &[f64], t: f64) -> Vec<Complex64> {
    values.iter().map(|&l| Complex64::from_polar(1.0, -l * t)).collect()
}

/// `e^{-iHt}` from a single full eigendecomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    n_cells: usize,
    with_emitter: bool,
    eig: TridiagonalEigen,
}

impl Propagator {
    pub fn new(h: &HamiltonianMatrix) -> Result<Self> {
        let eig = TridiagonalEigen::new(&h.diag(), h.offdiag(), Accumulate::Full)?;
        Ok(Self {
            n_cells: h.n_cells(),
            with_emitter: h.with_emitter(),
            eig,
        })
    }

    pub fn energies(&self) -> &[f64] {
        self.eig.values()
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    fn check(&self, psi: &StateVector) -> Result<()> {
        if psi.len() != self.dim() || psi.with_emitter() != self.with_emitter {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.len(),
            });
        }
        Ok(())
    }

    /// Eigenbasis coefficients `U^T psi`.
    fn coefficients(&self, psi: &StateVector) -> Vec<Complex64> {
        (0..self.dim())
            .map(|i| {
                self.eig
                    .vector_rows(i)
                    .iter()
                    .zip(psi.amps())
                    .map(|(&u, &a)| u * a)
                    .sum()
            })
            .collect()
    }

    fn reconstruct(&self, coeffs: &[Complex64], t: f64) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = vec![Complex64::default(); n];
        for (i, (c, p)) in coeffs.iter().zip(phases(self.eig.values(), t)).enumerate() {
            let w = c * p;
            for (o, &u) in out.iter_mut().zip(self.eig.vector_rows(i)) {
                *o += w * u;
            }
        }
        out
    }

    pub fn evolve(&self, initial: &StateVector, t: f64) -> Result<StateVector> {
        self.check(initial)?;
        if t == 0.0 {
            return Ok(initial.clone());
        }
        let coeffs = self.coefficients(initial);
        StateVector::from_amps(self.n_cells, self.with_emitter, self.reconstruct(&coeffs, t))
    }

    pub fn evolve_grid(&self, initial: &StateVector, grid: &TimeGrid) -> Result<Vec<StateVector>> {
        self.check(initial)?;
        let coeffs = self.coefficients(initial);
        grid.times()
            .par_iter()
            .map(|&t| {
                if t == 0.0 {
                    Ok(initial.clone())
                } else {
                    StateVector::from_amps(self.n_cells, self.with_emitter, self.reconstruct(&coeffs, t))
                }
            })
            .collect()
    }
}

/// `psi(t) = e^{-iHt} psi(0)` on every grid time.
pub fn propagate(h: &HamiltonianMatrix, initial: &StateVector, grid: &TimeGrid) -> Result<Vec<StateVector>> {
    if initial.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: initial.len(),
        });
    }
    Propagator::new(h)?.evolve_grid(initial, grid)
}

/// Largest deviation of `||psi(t)||` from `||psi(0)||`.
pub fn max_norm_deviation(states: &[StateVector]) -> f64 {
    let Some(first) = states.first() else {
        return 0.0;
    };
    let n0 = first.norm();
    states.iter().map(|s| (s.norm() - n0).abs()).fold(0.0, f64::max)
}

/// Survival amplitude `<q|e^{-iHt}|q>` from eigenvalues and emitter weights only.
///
/// Accumulating a single eigenvector component keeps the cost quadratic in
/// the chain length, which makes chains of thousands of cells cheap.
#[derive(Debug, Clone)]
pub struct EmitterPropagator {
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl EmitterPropagator {
    pub fn new(h: &HamiltonianMatrix) -> Result<Self> {
        if !h.with_emitter() {
            return Err(Error::Precondition("survival needs the emitter site".into()));
        }
        let eig = TridiagonalEigen::new(&h.diag(), h.offdiag(), Accumulate::Rows(vec![0]))?;
        let weights = (0..eig.dim()).map(|i| eig.vector_rows(i)[0].powi(2)).collect();
        Ok(Self {
            energies: eig.values().to_vec(),
            weights,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Squared emitter component of each eigenvector.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.energies
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| w * Complex64::from_polar(1.0, -e * t))
            .sum()
    }

    pub fn amplitudes(&self, times: &[f64]) -> Vec<Complex64> {
        times.par_iter().map(|&t| self.amplitude(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    fn params(j1: f64, j2: f64, g: f64) -> CouplingParams {
        CouplingParams::new(j1, j2, g).unwrap()
    }

    #[test]
    fn initial_state_at_zero_and_unitarity() {
        let q = params(1.5, 1.0, 0.4);
        let h = build_hamiltonian(&q, 60, true).unwrap();
        let psi0 = StateVector::basis(60, true, Site::Emitter).unwrap();
        let grid = TimeGrid::new(0.0, 20.0, 41).unwrap();
        let states = propagate(&h, &psi0, &grid).unwrap();
        assert_eq!(states[0], psi0);
        assert!(max_norm_deviation(&states) < 1e-10);
    }

    #[test]
    fn decoupled_emitter_is_stationary() {
        let q = params(1.5, 1.0, 0.0);
        let h = build_hamiltonian(&q, 20, true).unwrap();
        let psi0 = StateVector::basis(20, true, Site::Emitter).unwrap();
        let p = Propagator::new(&h).unwrap();
        for t in [0.5, 3.0, 17.0] {
            let psi = p.evolve(&psi0, t).unwrap();
            assert!((psi.amp(Site::Emitter) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn emitter_propagator_matches_full() {
        let q = params(1.0, 1.5, 0.8);
        let h = build_hamiltonian(&q, 80, true).unwrap();
        let psi0 = StateVector::basis(80, true, Site::Emitter).unwrap();
        let full = Propagator::new(&h).unwrap();
        let fast = EmitterPropagator::new(&h).unwrap();
        for t in [0.0, 1.0, 7.5, 30.0] {
            let a = full.evolve(&psi0, t).unwrap().amp(Site::Emitter);
            assert!((a - fast.amplitude(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let q = params(1.0, 1.5, 0.8);
        let h = build_hamiltonian(&q, 10, true).unwrap();
        let bad = StateVector::basis(11, true, Site::Emitter).unwrap();
        let grid = TimeGrid::new(0.0, 1.0, 2).unwrap();
        assert!(matches!(propagate(&h, &bad, &grid), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reflection_guard() {
        let q = params(1.5, 1.0, 0.1);
        assert_eq!(required_cells(&q, 100.0), 300);
        assert!(check_reflection_guard(&q, 299, 100.0).is_err());
        assert!(check_reflection_guard(&q, 300, 100.0).is_ok());
    }
}
