#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ssh_emitter::model::{build_hamiltonian, CouplingParams};
use ssh_emitter::spectrum::{classify_region, RegionLabel};

pub fn params(j1: f64, j2: f64, g: f64) -> CouplingParams {
    CouplingParams::new(j1, j2, g).unwrap()
}

/// Eigenvalues of the truncated Hamiltonian from a dense symmetric solve.
pub fn dense_spectrum(p: &CouplingParams, n_cells: usize, with_emitter: bool) -> Vec<f64> {
    let h: DMatrix<f64> = build_hamiltonian(p, n_cells, with_emitter).unwrap().to_dense();
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn nearest(values: &[f64], x: f64) -> f64 {
    values.iter().map(|v| (v - x).abs()).fold(f64::INFINITY, f64::min)
}

/// Random parameters in a requested region, by rejection sampling.
pub fn draw_in_region(rng: &mut ChaCha8Rng, region: &RegionLabel) -> CouplingParams {
    loop {
        let topological = matches!(region, RegionLabel::IV | RegionLabel::V) || rng.gen_bool(0.5);
        let (j1, j2) = if topological {
            (rng.gen_range(1.1..2.0), rng.gen_range(0.4..1.0))
        } else {
            (rng.gen_range(0.4..1.0), rng.gen_range(1.1..2.0))
        };
        let g = rng.gen_range(0.05..3.5);
        let p = params(j1, j2, g);
        let r = classify_region(&p);
        if &r != region {
            continue;
        }
        // Stay clear of boundaries so the truncations and tolerances below are meaningful.
        let margin = ssh_emitter::spectrum::region_boundaries(&p)
            .iter()
            .map(|(_, b)| (g - b).abs())
            .fold(f64::INFINITY, f64::min);
        if margin > 0.05 {
            return p;
        }
    }
}

/// Eigenvalues of the truncated Hamiltonian from the tridiagonal solver (cross-checked against
/// `dense_spectrum` in the model tests); used where the dense solve would dominate test time.
pub fn tridiagonal_spectrum(p: &CouplingParams, n_cells: usize, with_emitter: bool) -> Vec<f64> {
    let h = build_hamiltonian(p, n_cells, with_emitter).unwrap();
    ssh_emitter::numerics::TridiagonalEigen::new(
        &h.diag(),
        h.offdiag(),
        ssh_emitter::numerics::Accumulate::None,
    )
    .unwrap()
    .values()
    .to_vec()
}
