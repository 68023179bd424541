//! Implicit QL eigensolver for real symmetric tridiagonal matrices.
//!
//! Eigenvector accumulation is optional and can be restricted to a subset of
//! components. Keeping only the emitter component turns the survival
//! amplitude of a chain with thousands of sites into an O(n^2) computation.

use crate::error::{Error, Result};

/// Which eigenvector components to accumulate during the QL sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Accumulate {
    /// Eigenvalues only.
    None,
    /// Only these components (matrix row indices) of every eigenvector.
    Rows(Vec<usize>),
    /// Full eigenvectors.
    Full,
}

/// Eigenvalues in ascending order plus whatever eigenvector data was requested.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    n: usize,
    values: Vec<f64>,
    rows: Vec<usize>,
    // vectors[i * rows.len() + r]: component rows[r] of eigenvector i.
    vectors: Vec<f64>,
}

const MAX_SWEEPS: usize = 60;

impl TridiagonalEigen {
    /// `diag` has length n, `offdiag` length n-1 (`offdiag[i]` couples i and i+1).
    pub fn new(diag: &[f64], offdiag: &[f64], accumulate: Accumulate) -> Result<Self> {
        let n = diag.len();
        if n == 0 || offdiag.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                got: offdiag.len(),
            });
        }
        let rows: Vec<usize> = match accumulate {
            Accumulate::None => Vec::new(),
            Accumulate::Rows(r) => r,
            Accumulate::Full => (0..n).collect(),
        };
        if let Some(&bad) = rows.iter().find(|&&r| r >= n) {
            return Err(Error::Precondition(format!("row {bad} out of range {n}")));
        }
        let nr = rows.len();
        let mut vectors = vec![0.0; n * nr];
        for (r, &row) in rows.iter().enumerate() {
            vectors[row * nr + r] = 1.0;
        }

        let mut d = diag.to_vec();
        let mut e = offdiag.to_vec();
        e.push(0.0);

        for l in 0..n {
            let mut sweeps = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::EigenNotConverged(l));
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut i = m;
                let mut deflated = false;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if nr > 0 {
                        let (lo, hi) = vectors.split_at_mut((i + 1) * nr);
                        let zi = &mut lo[i * nr..];
                        let zi1 = &mut hi[..nr];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let f = *b;
                            *b = s * *a + c * f;
                            *a = c * *a - s * f;
                        }
                    }
                }
                if deflated {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let values = order.iter().map(|&i| d[i]).collect();
        let mut sorted = Vec::with_capacity(n * nr);
        for &i in &order {
            sorted.extend_from_slice(&vectors[i * nr..(i + 1) * nr]);
        }
        Ok(Self {
            n,
            values,
            rows,
            vectors: sorted,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The accumulated components of eigenvector `i`, in the order requested.
    pub fn vector_rows(&self, i: usize) -> &[f64] {
        let nr = self.rows.len();
        &self.vectors[i * nr..(i + 1) * nr]
    }

    /// Component `row` of eigenvector `i`, if it was accumulated.
    pub fn component(&self, i: usize, row: usize) -> Option<f64> {
        let r = self.rows.iter().position(|&x| x == row)?;
        Some(self.vectors[i * self.rows.len() + r])
    }

    /// Whether full eigenvectors are available (rows are `0..n` in order).
    pub fn has_full_vectors(&self) -> bool {
        self.rows.len() == self.n && self.rows.iter().enumerate().all(|(i, &r)| i == r)
    }
}
