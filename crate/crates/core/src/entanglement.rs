//! Logarithmic negativity of `1 x N` partitions through an equivalent
//! two-mode state.
//!
//! For a `1 x N` state only two symplectic eigenvalues of the partially
//! transposed matrix can drop below one, and they coincide with the
//! transposed spectrum of a two-mode state fixed by four invariants:
//!
//! ```text
//! mu^eq    = nu_-^{N-1} mu_sigma
//! Delta^eq = Delta_ag + (nu_-^{N-1} mu_{beta^N})^{-2}
//! mu_1^eq  = mu_alpha
//! mu_2^eq  = nu_-^{N-1} mu_{beta^N}
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::symmetric::{one_plus_n_invariants, two_mode_nus, OnePlusNState, SymmetricBlock};
use crate::{Error, Result, PHYSICAL_TOL};

/// Global and local invariants of the equivalent two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeEquivalent {
    pub mu_eq: f64,
    pub delta_eq: f64,
    pub mu1_eq: f64,
    pub mu2_eq: f64,
}

impl TwoModeEquivalent {
    /// Seralian of the partial transpose, `-Delta + 2/mu_1^2 + 2/mu_2^2`.
    pub fn delta_tilde(&self) -> f64 {
        -self.delta_eq + 2.0 / (self.mu1_eq * self.mu1_eq) + 2.0 / (self.mu2_eq * self.mu2_eq)
    }

    /// Symplectic pair `(n_-, n_+)` of the equivalent state itself.
    pub fn spectrum(&self) -> Result<(f64, f64)> {
        two_mode_nus(self.mu_eq, self.delta_eq)
    }

    /// Symplectic pair `(n~_-, n~_+)` of its partial transpose.
    pub fn transposed_spectrum(&self) -> Result<(f64, f64)> {
        two_mode_nus(self.mu_eq, self.delta_tilde())
    }
}

/// Logarithmic negativity (nats) together with the smallest transposed
/// symplectic eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    pub value: f64,
    pub n_tilde_minus: f64,
    pub entangled: bool,
}

impl NegativityResult {
    pub fn from_n_tilde_minus(n_tilde_minus: f64) -> Self {
        Self {
            value: (-n_tilde_minus.ln()).max(0.0),
            n_tilde_minus,
            entangled: n_tilde_minus < 1.0,
        }
    }

    /// Value in bits, for display only.
    pub fn value_bits(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }
}

pub fn equivalent_two_mode(state: &OnePlusNState) -> Result<TwoModeEquivalent> {
    let n = state.n();
    let inv = one_plus_n_invariants(state)?;
    let mu2_eq = inv.scaled_purity(n, inv.mu_beta_n);
    Ok(TwoModeEquivalent {
        mu_eq: inv.scaled_purity(n, inv.mu_sigma),
        delta_eq: inv.delta_ag + (mu2_eq * mu2_eq).recip(),
        mu1_eq: inv.mu_alpha,
        mu2_eq,
    })
}

/// `max(0, -ln n~_-)` for the equivalent two-mode state.
pub fn negativity_from_equivalent(eq: &TwoModeEquivalent) -> Result<NegativityResult> {
    if !(eq.mu_eq > 0.0)
        || !eq.delta_eq.is_finite()
        || !eq.mu1_eq.is_finite()
        || !eq.mu2_eq.is_finite()
    {
        return Err(Error::InvalidInvariants(format!("{eq:?}")));
    }
    let (n_minus, n_plus) = eq.transposed_spectrum()?;
    if n_plus < 1.0 - PHYSICAL_TOL {
        return Err(Error::InvalidInvariants(format!(
            "larger transposed eigenvalue {n_plus} < 1"
        )));
    }
    Ok(NegativityResult::from_n_tilde_minus(n_minus))
}

/// Exact `1 x K` negativity inside a fully symmetric state: one mode against
/// `K` others, after tracing out the remaining `N - 1 - K` modes.
pub fn one_by_k_negativity(block: &SymmetricBlock, k: usize) -> Result<NegativityResult> {
    if k == 0 || k + 1 > block.n_modes {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={} for a {}-mode state",
            block.n_modes.saturating_sub(1),
            block.n_modes
        )));
    }
    let state = OnePlusNState::split_fully_symmetric(block, k);
    negativity_from_equivalent(&equivalent_two_mode(&state)?)
}

/// `1 x K` negativities for `K = 1..=k_max`, ascending in `K`.
pub fn entanglement_hierarchy(
    block: &SymmetricBlock,
    k_max: usize,
) -> Result<Vec<(usize, NegativityResult)>> {
    if k_max + 1 > block.n_modes {
        return Err(Error::InvalidParameter(format!(
            "k_max = {k_max} exceeds N - 1 = {}",
            block.n_modes.saturating_sub(1)
        )));
    }
    (1..=k_max)
        .into_par_iter()
        .map(|k| one_by_k_negativity(block, k).map(|r| (k, r)))
        .collect()
}

/// Von Neumann entropy of a single-mode state with symplectic eigenvalue `b`:
/// `((b+1)/2) ln((b+1)/2) - ((b-1)/2) ln((b-1)/2)`.
pub fn entropy_of_entanglement(b: f64) -> Result<f64> {
    if !(b >= 1.0) {
        return Err(Error::InvalidParameter(format!("b = {b} must be >= 1")));
    }
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    Ok(xlnx(0.5 * (b + 1.0)) - xlnx(0.5 * (b - 1.0)))
}
