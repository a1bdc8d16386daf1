use thiserror::Error;

/// Errors raised by the solver components.
#[derive(Debug, Error)]
pub enum GpeError {
    #[error("invalid domain: a = {a}, b = {b}, n_cells = {n_cells} (need a < b and n_cells >= 2)")]
    InvalidDomain { a: f64, b: f64, n_cells: usize },

    #[error("matrix is numerically singular: pivot {pivot:e} at row {row}")]
    NearSingular { row: usize, pivot: f64 },

    #[error("fields live on different meshes")]
    MeshMismatch,

    #[error("field is not L2-normalized: |v| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("potential is negative at node {node}: V = {value}")]
    NegativePotential { node: usize, value: f64 },

    #[error("shift coincides with the ground-state eigenvalue (|lambda - sigma| = {gap:e})")]
    ShiftEqualsLambda { gap: f64 },

    #[error("nonpositive gamma: (G_u u, u)_L2 = {inner} <= 0, iterate left the basin")]
    NonpositiveGamma { inner: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("maximum iteration count {max_iter} exceeded (last eigenvalue increment {last_increment:e})")]
    MaxIterExceeded { max_iter: usize, last_increment: f64 },

    #[error("not enough valid contraction ratios: {valid} (need at least 6)")]
    InsufficientData { valid: usize },
}

pub type Result<T> = std::result::Result<T, GpeError>;
