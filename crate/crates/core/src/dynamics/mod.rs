//! Time evolution of an initially excited emitter.

mod channels;
mod contour;
mod decompose;
pub mod fit;
mod grid;
mod heatmap;
mod propagate;

pub use channels::{
    alpha_far_zone, alpha_near_zone, branch_far_zone, branch_near_zone, crossover_timescale, crossover_x,
    free_motion_amplitude, free_motion_significant, phi, phi_at_k0, pole_sum, weak_coupling_evolution,
    weak_coupling_frequency, ExpansionPoint, FreeMotion,
};
pub use contour::{survival_contour, ContourSpec};
pub use decompose::{decompose_survival, zone_at, SurvivalDecomposition, Zone};
pub use grid::{Channel, HeatmapTable, TimeGrid, TimeSeriesTable};
pub use heatmap::{site_heatmap, MAX_HEATMAP_ROWS};
pub use propagate::{
    check_reflection_guard, max_norm_deviation, propagate, required_cells, tail_probability, EmitterPropagator,
    Propagator, GUARD_MARGIN, TAIL_LIMIT,
};
