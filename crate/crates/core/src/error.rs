use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid coupling parameters: {0}")]
    InvalidParams(String),

    #[error("n_cells must be at least 1 (got {0})")]
    InvalidCells(usize),

    #[error("winding curve passes within {modulus:.3e} of the origin at k = {k:.6}; gap closes, winding undefined")]
    DegenerateCurve { k: f64, modulus: f64 },

    #[error("z = {z} lies within {distance:.3e} of branch point {branch_point}")]
    BranchPointProximity {
        z: Complex64,
        branch_point: f64,
        distance: f64,
    },

    #[error("g = j1 makes the discrete-eigenvalue denominator vanish (II/III crossover)")]
    SingularCoupling,

    #[error("no normalizable edge state for j1 <= j2 (j1 = {j1}, j2 = {j2})")]
    NoEdgeState { j1: f64, j2: f64 },

    #[error("zero mode is anti-bound (not normalizable) for j1 >= j2 (j1 = {j1}, j2 = {j2})")]
    ZeroModeNotNormalizable { j1: f64, j2: f64 },

    #[error("bound pair is delocalized in region {region}; only generalized states exist")]
    Delocalized { region: String },

    #[error("continuum state ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("z = {z} is not a pole on the {sheet} sheet (|z - Sigma(z)| = {residual:.3e})")]
    NotAPole {
        z: Complex64,
        sheet: String,
        residual: f64,
    },

    #[error("transfer-matrix recursion diverges at cell {cell}: growing-mode weight {weight:.3e}")]
    RecursionDiverged { cell: usize, weight: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature failed to converge: estimated error {error:.3e} > target {target:.3e} after {intervals} intervals")]
    QuadratureFailed {
        error: f64,
        target: f64,
        intervals: usize,
    },

    #[error("reflection guard: n_cells = {given} is too small for t_end = {t_end}; need at least {required}")]
    ReflectionGuard {
        given: usize,
        required: usize,
        t_end: f64,
    },

    #[error("truncation monitor: probability {probability:.3e} reached the last 10% of the chain")]
    TailLeak { probability: f64 },

    #[error("operation requires region {expected}, parameters are in {actual}")]
    WrongRegion { expected: String, actual: String },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigensolver did not converge for index {0}")]
    EigenNotConverged(usize),

    #[error("Newton polishing failed to converge from seed {seed}")]
    NewtonFailed { seed: Complex64 },
}

pub type Result<T> = std::result::Result<T, Error>;
