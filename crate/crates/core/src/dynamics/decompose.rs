use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channels::{
    branch_far_zone, branch_near_zone, crossover_timescale, pole_sum, weak_coupling_frequency,
};
use super::contour::{survival_contour, ContourSpec};
use super::grid::{Channel, TimeGrid, TimeSeriesTable};
use super::propagate::{check_reflection_guard, EmitterPropagator};
use crate::error::Result;
use crate::model::{build_hamiltonian, CouplingParams};
use crate::spectrum::{classify_region, RegionLabel};

/// Which outer band-edge form applies at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Near,
    Far,
}

pub fn zone_at(params: &CouplingParams, t: f64) -> Zone {
    if t > crossover_timescale(params) {
        Zone::Far
    } else {
        Zone::Near
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalDecomposition {
    pub table: TimeSeriesTable,
    /// `max_t |numeric - (pole_sum + branch)|` with the zone-appropriate branch form, over `t > 0`.
    pub max_branch_residual: f64,
    pub crossover_timescale: f64,
}

/// Survival amplitude from every available channel on a common grid.
///
/// The analytic branch channels are undefined at `t = 0` and stored as NaN there.
pub fn decompose_survival(params: &CouplingParams, grid: &TimeGrid, n_cells: usize) -> Result<SurvivalDecomposition> {
    check_reflection_guard(params, n_cells, grid.t_end())?;
    let times = grid.times();
    let h = build_hamiltonian(params, n_cells, true)?;
    let numeric = EmitterPropagator::new(&h)?.amplitudes(&times);
    let spec = ContourSpec::default();
    let contour = times
        .par_iter()
        .map(|&t| survival_contour(params, t, &spec))
        .collect::<Result<Vec<_>>>()?;
    let poles = times.iter().map(|&t| pole_sum(params, t)).collect::<Result<Vec<_>>>()?;
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let branch = |f: fn(&CouplingParams, f64) -> Complex64| -> Vec<Complex64> {
        times.iter().map(|&t| if t > 0.0 { f(params, t) } else { nan }).collect()
    };
    let near = branch(branch_near_zone);
    let far = branch(branch_far_zone);

    let mut max_branch_residual: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if t > 0.0 {
            let b = match zone_at(params, t) {
                Zone::Near => near[i],
                Zone::Far => far[i],
            };
            max_branch_residual = max_branch_residual.max((numeric[i] - poles[i] - b).norm());
        }
    }

    let mut table = TimeSeriesTable::new(*grid);
    table.insert(Channel::Numeric, numeric)?;
    table.insert(Channel::Contour, contour)?;
    table.insert(Channel::PoleSum, poles)?;
    table.insert(Channel::NearZone, near)?;
    table.insert(Channel::FarZone, far)?;
    if classify_region(params) == RegionLabel::V {
        let omega = weak_coupling_frequency(params);
        table.insert(
            Channel::WeakCoupling,
            times.iter().map(|&t| Complex64::new((omega * t).cos(), 0.0)).collect(),
        )?;
    }
    Ok(SurvivalDecomposition {
        table,
        max_branch_residual,
        crossover_timescale: crossover_timescale(params),
    })
}
