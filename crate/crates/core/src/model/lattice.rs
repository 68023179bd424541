use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice site. Cells are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    Emitter,
    A(usize),
    B(usize),
}

impl Site {
    fn key(&self) -> (usize, u8) {
        match *self {
            Site::Emitter => (0, 0),
            Site::A(n) => (n, 0),
            Site::B(n) => (n, 1),
        }
    }

    /// Matrix index in the ordering `Emitter, A(1), B(1), A(2), ...`.
    pub fn index(&self, with_emitter: bool) -> Option<usize> {
        let offset = usize::from(with_emitter);
        match *self {
            Site::Emitter => with_emitter.then_some(0),
            Site::A(n) if n >= 1 => Some(offset + 2 * (n - 1)),
            Site::B(n) if n >= 1 => Some(offset + 2 * (n - 1) + 1),
            _ => None,
        }
    }

    pub fn from_index(index: usize, with_emitter: bool) -> Site {
        let i = if with_emitter {
            if index == 0 {
                return Site::Emitter;
            }
            index - 1
        } else {
            index
        };
        let cell = i / 2 + 1;
        if i % 2 == 0 {
            Site::A(cell)
        } else {
            Site::B(cell)
        }
    }

    pub fn cell(&self) -> usize {
        match *self {
            Site::Emitter => 0,
            Site::A(n) | Site::B(n) => n,
        }
    }

    /// Single-letter sublattice tag used in file output.
    pub fn kind_tag(&self) -> &'static str {
        match self {
            Site::Emitter => "Q",
            Site::A(_) => "A",
            Site::B(_) => "B",
        }
    }
}

impl PartialOrd for Site {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Site {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Emitter => write!(f, "q"),
            Site::A(n) => write!(f, "{n},A"),
            Site::B(n) => write!(f, "{n},B"),
        }
    }
}

/// Number of matrix rows for a chain of `n_cells` cells.
pub fn dimension(n_cells: usize, with_emitter: bool) -> usize {
    2 * n_cells + usize::from(with_emitter)
}

/// Single-particle amplitudes in site order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_cells: usize,
    with_emitter: bool,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(n_cells: usize, with_emitter: bool) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidCells(n_cells));
        }
        Ok(Self {
            n_cells,
            with_emitter,
            amps: vec![Complex64::new(0.0, 0.0); dimension(n_cells, with_emitter)],
        })
    }

    pub fn from_amps(n_cells: usize, with_emitter: bool, amps: Vec<Complex64>) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidCells(n_cells));
        }
        let expected = dimension(n_cells, with_emitter);
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: amps.len(),
            });
        }
        Ok(Self {
            n_cells,
            with_emitter,
            amps,
        })
    }

    pub fn from_real(n_cells: usize, with_emitter: bool, amps: &[f64]) -> Result<Self> {
        Self::from_amps(
            n_cells,
            with_emitter,
            amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        )
    }

    /// The state localized on one site.
    pub fn basis(n_cells: usize, with_emitter: bool, site: Site) -> Result<Self> {
        let mut s = Self::zeros(n_cells, with_emitter)?;
        let i = s.checked_index(site)?;
        s.amps[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    fn checked_index(&self, site: Site) -> Result<usize> {
        site.index(self.with_emitter)
            .filter(|&i| i < self.amps.len())
            .ok_or_else(|| Error::Precondition(format!("site {site} not in this lattice")))
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn with_emitter(&self) -> bool {
        self.with_emitter
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    /// Amplitude on `site`, zero if the site lies outside the truncation.
    pub fn amp(&self, site: Site) -> Complex64 {
        site.index(self.with_emitter)
            .and_then(|i| self.amps.get(i).copied())
            .unwrap_or_default()
    }

    pub fn set_amp(&mut self, site: Site, value: Complex64) -> Result<()> {
        let i = self.checked_index(site)?;
        self.amps[i] = value;
        Ok(())
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.amps.len()).map(|i| Site::from_index(i, self.with_emitter))
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
        self
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        self.amps.iter_mut().for_each(|a| *a *= factor);
        self
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `a*self + b*other`.
    pub fn combine(&self, a: Complex64, other: &StateVector, b: Complex64) -> Result<StateVector> {
        self.check_same_shape(other)?;
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(StateVector {
            n_cells: self.n_cells,
            with_emitter: self.with_emitter,
            amps,
        })
    }

    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        let diff = self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))?;
        Ok(diff.norm())
    }

    /// Per-site probabilities `|amp|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_same_shape(&self, other: &StateVector) -> Result<()> {
        if self.amps.len() != other.amps.len() || self.with_emitter != other.with_emitter {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_map_is_bijective() {
        for &with_emitter in &[true, false] {
            let dim = dimension(7, with_emitter);
            for i in 0..dim {
                let s = Site::from_index(i, with_emitter);
                assert_eq!(s.index(with_emitter), Some(i));
            }
        }
        assert_eq!(Site::Emitter.index(false), None);
        assert_eq!(Site::A(0).index(true), None);
    }

    #[test]
    fn ordering_interleaves_sublattices() {
        let mut sites = vec![Site::B(2), Site::A(1), Site::Emitter, Site::A(2), Site::B(1)];
        sites.sort();
        assert_eq!(
            sites,
            vec![Site::Emitter, Site::A(1), Site::B(1), Site::A(2), Site::B(2)]
        );
    }

    #[test]
    fn length_and_norm() {
        let s = StateVector::basis(3, true, Site::B(2)).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(s.norm(), 1.0);
        assert_eq!(s.amp(Site::B(2)), Complex64::new(1.0, 0.0));
        assert_eq!(s.amp(Site::A(9)), Complex64::new(0.0, 0.0));
        assert!(StateVector::basis(3, false, Site::Emitter).is_err());
        assert!(StateVector::zeros(0, true).is_err());
        assert!(StateVector::from_amps(2, false, vec![Complex64::default(); 5]).is_err());
    }
}
