//! Lattice Hamiltonians and the winding numbers of their Bloch factors.

mod hamiltonian;
mod lattice;
mod params;
mod winding;

pub use hamiltonian::{build_hamiltonian, chiral_operator, ChiralOperator, HamiltonianMatrix};
pub use lattice::{dimension, Site, StateVector};
pub use params::CouplingParams;
pub use winding::{
    dispersion, sample_curve, winding_factor, winding_number, winding_of, Band, WindingVariant,
    DEFAULT_WINDING_SAMPLES, GAP_CLOSURE_TOL,
};
