//! Covariance-matrix toolkit for continuous-variable Gaussian states.
//!
//! The crate builds fully symmetric and `1 x N` block-symmetric covariance
//! matrices, computes their symplectic spectra both in closed form and
//! numerically, and evaluates the logarithmic negativity of `1 x N` (and
//! nested `1 x K`) bipartitions through an equivalent two-mode state.
//!
//! Conventions used everywhere:
//!
//! * quadratures are ordered `(x_1, p_1, ..., x_N, p_N)`;
//! * the single-mode symplectic form is `omega = [[0, 1], [-1, 0]]`;
//! * the vacuum covariance matrix is the identity, so physical states have
//!   symplectic eigenvalues `nu >= 1`;
//! * logarithms are natural (negativities are in nats).

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN.

pub mod covariance;
pub mod entanglement;
mod error;
pub mod ghz;
mod mat2;
pub mod symmetric;
pub mod verification;

pub use covariance::{
    log_negativity_numeric, partial_transpose, purity, reduce, seralian, symplectic_form,
    symplectic_spectrum_numeric, validate, CovarianceMatrix, ModePartition, PhysicalityReport,
    SymplecticSpectrum,
};
pub use entanglement::{
    entanglement_hierarchy, entropy_of_entanglement, equivalent_two_mode,
    negativity_from_equivalent, one_by_k_negativity, NegativityResult, TwoModeEquivalent,
};
pub use error::{Error, Result};
pub use ghz::{
    build_ghz, ghz_covariances, ghz_hierarchy, ghz_limit, scaling_table, GhzSpec, ScalingRow,
};
pub use symmetric::{
    build_fully_symmetric, build_one_plus_n, fs_spectrum, global_purity_fs, nu_plus_of_n,
    one_plus_n_invariants, one_plus_n_spectrum, two_mode_nus, BlockSpec, OnePlusNInvariants,
    OnePlusNState, SymmetricBlock, SymmetricBlockParams,
};

/// Absolute tolerance on the smallest symplectic eigenvalue when deciding
/// physicality (`nu_min >= 1 - PHYSICAL_TOL`).
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Largest asymmetry `|s_ij - s_ji|` accepted when reading a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
