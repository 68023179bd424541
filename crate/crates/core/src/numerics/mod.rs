//! Numerical building blocks shared by the physics modules.

pub mod quadrature;
pub mod tridiag;

pub use quadrature::{integrate_path, QuadratureResult, QuadratureSpec};
pub use tridiag::{Accumulate, TridiagonalEigen};
