use thiserror::Error;

use crate::C64;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidSpec(String),

    #[error("boundary couplings are not on the mu-line (tR/dR = {lhs}, dL/tL = {rhs})")]
    OffMuLine { lhs: f64, rhs: f64 },

    #[error("root finder did not converge: residual {residual:e} after {iterations} iterations")]
    RootFinding { residual: f64, iterations: usize },

    #[error("root pairing failed: {0}")]
    Pairing(String),

    #[error("boundary matrix has full rank at theta = {theta}; not an eigen-solution")]
    InconsistentRoot { theta: C64 },

    #[error("no edge solution: alpha = {alpha} does not exceed alpha_c = {alpha_c}")]
    NoEdgeSolution { alpha: f64, alpha_c: f64 },

    #[error("asymptotic iteration did not converge for mode {mode}")]
    AsymptoticNonConvergence { mode: usize },

    #[error("QR iteration did not converge; {converged} of {dim} eigenvalues found")]
    EigenNonConvergence {
        dim: usize,
        converged: usize,
        partial: Vec<C64>,
    },

    #[error("matrix dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("mode {0} is the zero vector")]
    ZeroVector(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
