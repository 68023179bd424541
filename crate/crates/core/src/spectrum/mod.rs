//! Self-energy of the emitter and the discrete spectrum it determines.

mod discrete;
mod region;
mod self_energy;
mod states;
mod transfer;

pub use discrete::{
    band_weight, discrete_eigenvalues, first_sheet_poles, pair_wavevector, polish_root, residue_at,
    spectral_density, sum_rule, z_plus_closed_form, DiscreteState, StateKind, SumRule, POLE_TOL, ROOT_TOL,
};
pub use region::{classify_region, region_boundaries, region_transitions, RegionLabel, Transition, BOUNDARY_TOL};
pub use self_energy::{
    reservoir_self_energy, s_branch, self_energy, self_energy_derivative, zero_mode_on_sheet, SelfEnergyEval,
    SheetTag, BRANCH_POINT_TOL,
};
pub use states::{
    bound_pair_emitter_amplitude, bound_pair_states, cells_for_length, continuum_state, edge_state,
    has_bound_pair, localization, localization_length, recommended_cells, sublattice_ratio, sym_antisym_states,
    zero_mode, zero_mode_weight, Localization, EDGE_EXCLUSION, MIN_CELLS,
};
pub use transfer::{eigenpairs, first_cell, transfer_matrix, transfer_matrix_oracle, Eigenpairs, GROWTH_TOL};
