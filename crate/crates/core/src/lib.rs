//! A quantum emitter side-coupled to the end of a semi-infinite SSH chain.
//!
//! [`model`] builds Hamiltonians and winding numbers. [`spectrum`] locates the
//! discrete states on both Riemann sheets of the self-energy. [`dynamics`]
//! evolves an initially excited emitter.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::CouplingParams;
