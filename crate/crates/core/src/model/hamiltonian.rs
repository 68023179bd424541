use nalgebra::DMatrix;
use num_complex::Complex64;

use super::lattice::{dimension, Site, StateVector};
use super::params::CouplingParams;
use crate::error::{Error, Result};

/// Nearest-neighbour Hamiltonian of the (emitter +) truncated chain.
///
/// In site order the matrix is tridiagonal with a zero diagonal, so only the
/// first off-diagonal is stored; [`HamiltonianMatrix::to_dense`] expands it.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    params: CouplingParams,
    n_cells: usize,
    with_emitter: bool,
    offdiag: Vec<f64>,
}

pub fn build_hamiltonian(
    params: &CouplingParams,
    n_cells: usize,
    with_emitter: bool,
) -> Result<HamiltonianMatrix> {
    if n_cells == 0 {
        return Err(Error::InvalidCells(n_cells));
    }
    let dim = dimension(n_cells, with_emitter);
    let offdiag = (0..dim - 1)
        .map(|i| {
            match (
                Site::from_index(i, with_emitter),
                Site::from_index(i + 1, with_emitter),
            ) {
                (Site::Emitter, Site::A(1)) => params.g(),
                (Site::A(_), Site::B(_)) => params.j2(),
                (Site::B(_), Site::A(_)) => params.j1(),
                (a, b) => unreachable!("non-adjacent pair {a} / {b}"),
            }
        })
        .collect();
    Ok(HamiltonianMatrix {
        params: *params,
        n_cells,
        with_emitter,
        offdiag,
    })
}

impl HamiltonianMatrix {
    pub fn params(&self) -> &CouplingParams {
        &self.params
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn with_emitter(&self) -> bool {
        self.with_emitter
    }

    pub fn dim(&self) -> usize {
        self.offdiag.len() + 1
    }

    /// `H[i][i+1]` for `i = 0..dim-1`.
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// The diagonal is identically zero (resonant emitter, no on-site energies).
    pub fn diag(&self) -> Vec<f64> {
        vec![0.0; self.dim()]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            _ if i + 1 == j => self.offdiag[i],
            _ if j + 1 == i => self.offdiag[j],
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, &h) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = h;
            m[(i + 1, i)] = h;
        }
        m
    }

    /// `-H`, which has the same eigenvectors and mirrored spectrum.
    pub fn negated(&self) -> HamiltonianMatrix {
        HamiltonianMatrix {
            offdiag: self.offdiag.iter().map(|h| -h).collect(),
            ..self.clone()
        }
    }

    pub fn apply_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut y = vec![Complex64::default(); n];
        for (i, &h) in self.offdiag.iter().enumerate() {
            y[i] += h * x[i + 1];
            y[i + 1] += h * x[i];
        }
        y
    }

    /// `H |psi>`.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.len() != self.dim() || psi.with_emitter() != self.with_emitter {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.len(),
            });
        }
        StateVector::from_amps(self.n_cells, self.with_emitter, self.apply_slice(psi.amps()))
    }

    /// `||H psi - e psi||`.
    pub fn residual(&self, psi: &StateVector, energy: Complex64) -> Result<f64> {
        let h = self.apply(psi)?;
        Ok(h.amps()
            .iter()
            .zip(psi.amps())
            .map(|(a, b)| (a - energy * b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// Diagonal sublattice operator: `+1` on A sites, `-1` on B sites and on the
/// emitter, which acts as an extra B site.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralOperator {
    signs: Vec<i8>,
}

pub fn chiral_operator(n_cells: usize, with_emitter: bool) -> ChiralOperator {
    let signs = (0..dimension(n_cells, with_emitter))
        .map(|i| match Site::from_index(i, with_emitter) {
            Site::A(_) => 1,
            Site::B(_) | Site::Emitter => -1,
        })
        .collect();
    ChiralOperator { signs }
}

impl ChiralOperator {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.signs.len(),
            self.signs.iter().map(|&s| f64::from(s)),
        ))
    }

    /// `Sigma H Sigma`, evaluated with exact sign flips.
    pub fn conjugate(&self, h: &HamiltonianMatrix) -> Result<DMatrix<f64>> {
        if h.dim() != self.signs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.signs.len(),
                got: h.dim(),
            });
        }
        let mut m = h.to_dense();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if self.signs[i] * self.signs[j] < 0 {
                    m[(i, j)] = -m[(i, j)];
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let amps = psi
            .amps()
            .iter()
            .zip(&self.signs)
            .map(|(a, &s)| a * f64::from(s))
            .collect();
        StateVector::from_amps(psi.n_cells(), psi.with_emitter(), amps)
            .expect("shape preserved")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_cell_with_emitter() {
        let p = CouplingParams::new(1.5, 1.0, 0.1).unwrap();
        let h = build_hamiltonian(&p, 1, true).unwrap().to_dense();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, 0.1, 0.0, 0.1, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(h, expected);
    }

    #[test]
    fn bare_chain_matches_ssh_truncation() {
        let p = CouplingParams::new(0.7, 1.3, 2.0).unwrap();
        let h = build_hamiltonian(&p, 3, false).unwrap().to_dense();
        assert_eq!(h.nrows(), 6);
        // Bare chain: A1-B1 is intracell and B1-A2 intercell.
        assert_eq!(h[(0, 1)], 1.3);
        assert_eq!(h[(1, 2)], 0.7);
        assert_eq!(h[(2, 3)], 1.3);
        assert_eq!(h[(0, 2)], 0.0);
        assert!(h.iter().all(|&x| x != 2.0));
    }

    #[test]
    fn zero_cells_rejected() {
        let p = CouplingParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(build_hamiltonian(&p, 0, true), Err(Error::InvalidCells(0)));
    }

    #[test]
    fn chiral_signs() {
        assert_eq!(chiral_operator(1, false).signs(), &[1, -1]);
        assert_eq!(chiral_operator(1, true).signs(), &[-1, 1, -1]);
    }

    #[test]
    fn chiral_anticommutes() {
        let p = CouplingParams::new(1.5, 1.0, 0.3).unwrap();
        for &e in &[true, false] {
            let h = build_hamiltonian(&p, 9, e).unwrap();
            let c = chiral_operator(9, e);
            assert_eq!(c.conjugate(&h).unwrap(), -h.to_dense());
        }
    }
}
