use rayon::prelude::*;

use super::grid::{HeatmapTable, TimeGrid};
use super::propagate::{check_reflection_guard, tail_probability, Propagator, TAIL_LIMIT};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, CouplingParams, Site, StateVector};

/// Row cap applied when heatmaps are written out.
pub const MAX_HEATMAP_ROWS: usize = 2000;

/// `|<s|e^{-iHt}|q>|^2` for every site and grid time.
///
/// Refuses truncations that violate the reflection guard and fails if any
/// probability reaches the far end of the chain.
pub fn site_heatmap(params: &CouplingParams, grid: &TimeGrid, n_cells: usize) -> Result<HeatmapTable> {
    check_reflection_guard(params, n_cells, grid.t_end())?;
    let h = build_hamiltonian(params, n_cells, true)?;
    let prop = Propagator::new(&h)?;
    let psi0 = StateVector::basis(n_cells, true, Site::Emitter)?;
    let rows: Vec<Result<Vec<f64>>> = grid
        .times()
        .par_iter()
        .map(|&t| {
            let psi = prop.evolve(&psi0, t)?;
            let tail = tail_probability(&psi);
            if tail >= TAIL_LIMIT {
                return Err(Error::TailLeak { probability: tail });
            }
            Ok(psi.probabilities())
        })
        .collect();
    let mut probs = Vec::with_capacity(grid.n_steps() * h.dim());
    for row in rows {
        probs.extend(row?);
    }
    let sites = psi0.sites().collect();
    HeatmapTable::new(*grid, sites, probs)
}
