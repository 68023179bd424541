//! Cell-to-cell recursion for real-energy eigenstates.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{CouplingParams, Site, StateVector};

/// Relative weight of the growing mode above which `energy` is not an eigenvalue.
pub const GROWTH_TOL: f64 = 1e-8;

/// `(A(n+1), B(n+1)) = M (A(n), B(n))` at a real energy.
pub fn transfer_matrix(params: &CouplingParams, energy: f64) -> Matrix2<f64> {
    let (j1, j2) = (params.j1(), params.j2());
    Matrix2::new(
        -j2 / j1,
        energy / j1,
        -energy / j1,
        (energy * energy - j1 * j1) / (j1 * j2),
    )
}

/// `(A(1), B(1))` per unit emitter amplitude, from the emitter and A(1) rows.
pub fn first_cell(params: &CouplingParams, energy: f64) -> Vector2<f64> {
    let (j2, g) = (params.j2(), params.g());
    Vector2::new(energy / g, (energy * energy / g - g) / j2)
}

/// Eigen-decomposition of a real 2x2 matrix with real spectrum.
#[derive(Debug, Clone, Copy)]
pub struct Eigenpairs {
    /// Eigenvalues sorted by increasing modulus.
    pub values: [f64; 2],
    /// Right eigenvectors, one per column.
    pub right: Matrix2<f64>,
    /// Left eigenvectors, one per row, with `left * right = 1`.
    pub left: Matrix2<f64>,
}

pub fn eigenpairs(m: &Matrix2<f64>) -> Option<Eigenpairs> {
    let half_tr = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let disc = half_tr * half_tr - m.determinant();
    if disc <= 0.0 {
        return None;
    }
    // Cancellation-free pair of roots.
    let big = half_tr + half_tr.signum() * disc.sqrt();
    let small = m.determinant() / big;
    let mut values = [small, big];
    if values[0].abs() > values[1].abs() {
        values.swap(0, 1);
    }
    let vec_for = |lam: f64| {
        let a = Vector2::new(m[(0, 1)], lam - m[(0, 0)]);
        let b = Vector2::new(lam - m[(1, 1)], m[(1, 0)]);
        let v = if a.norm() >= b.norm() { a } else { b };
        v / v.norm()
    };
    let right = Matrix2::from_columns(&[vec_for(values[0]), vec_for(values[1])]);
    let left = right.try_inverse()?;
    Some(Eigenpairs { values, right, left })
}

/// Builds the normalized eigenstate at `energy` by iterating the transfer
/// matrix from the first cell, keeping only the decaying mode.
pub fn transfer_matrix_oracle(params: &CouplingParams, energy: f64, n_cells: usize) -> Result<StateVector> {
    if n_cells == 0 {
        return Err(Error::InvalidCells(0));
    }
    if params.g() == 0.0 || energy == 0.0 {
        return Err(Error::Precondition("recursion needs g > 0 and a nonzero energy".into()));
    }
    let m = transfer_matrix(params, energy);
    let eig = eigenpairs(&m).ok_or(Error::RecursionDiverged { cell: 1, weight: 1.0 })?;
    if eig.values[0].abs() >= 1.0 {
        return Err(Error::RecursionDiverged { cell: 1, weight: 1.0 });
    }
    let v1 = first_cell(params, energy);
    let coeffs = eig.left * v1;
    let decaying = eig.right.column(0).into_owned();
    let growing = eig.right.column(1).into_owned();
    let weight = (coeffs[1] * growing).norm() / (coeffs[0] * decaying).norm();
    if !(weight < GROWTH_TOL) {
        return Err(Error::RecursionDiverged { cell: 1, weight });
    }
    let left_decay = eig.left.row(0).transpose();
    let mut amps = Vec::with_capacity(2 * n_cells + 1);
    amps.push(1.0);
    let mut v = coeffs[0] * decaying;
    for _ in 0..n_cells {
        amps.push(v[0]);
        amps.push(v[1]);
        let next = m * v;
        // Remove the rounding-seeded growing component before it can amplify.
        v = left_decay.dot(&next) * decaying;
    }
    let norm = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut psi = StateVector::zeros(n_cells, true)?;
    for (i, a) in amps.iter().enumerate() {
        psi.set_amp(Site::from_index(i, true), Complex64::new(a / norm, 0.0))?;
    }
    Ok(psi)
}
