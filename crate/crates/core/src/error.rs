use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("covariance matrix must be square with even dimension, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },

    #[error("declared n_modes = {declared} does not match a {dim}x{dim} matrix")]
    ModeCount { declared: usize, dim: usize },

    #[error("matrix is not symmetric: |s[{row}][{col}] - s[{col}][{row}]| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("unphysical state: smallest symplectic eigenvalue {min_nu} < 1")]
    Unphysical { min_nu: f64 },

    #[error("unphysical state: determinant {det} < 1")]
    DeterminantBelowOne { det: f64 },

    #[error("unphysical parameters: {0}")]
    UnphysicalParameters(String),

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode index {0} listed more than once")]
    DuplicateMode(usize),

    #[error("mode set must not be empty")]
    EmptyModeSet,

    #[error("invalid invariants: {0}")]
    InvalidInvariants(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
