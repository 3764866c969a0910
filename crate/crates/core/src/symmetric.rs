//! Fully symmetric `N`-mode states and `1 x N` block-symmetric states.
//!
//! A fully symmetric covariance matrix carries the same block `beta` on the
//! diagonal and the same symmetric block `eps` everywhere off the diagonal.
//! An orthogonal mixing of the `N` modes (which is itself symplectic) turns it
//! into `(beta - eps)^{(+)(N-1)} (+) (beta + (N-1) eps)`, so the spectrum is
//!
//! ```text
//! { nu_-  (N-1 times),  nu_+^(N) },
//! nu_-^2     = det(beta - eps)          = (b - e1)(b - e2)
//! nu_+^(N)^2 = det(beta + (N-1) eps)    = (b + (N-1) e1)(b + (N-1) e2)
//! ```
//!
//! where the right-hand forms hold for standard-form blocks
//! `beta = diag(b, b)`, `eps = diag(e1, e2)`. Note that `nu_-` names the
//! degenerate eigenvalue; it is the smaller of the two-mode pair only when
//! `e1 + e2 >= 0`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::covariance::{validate, CovarianceMatrix, SymplecticSpectrum};
use crate::{Error, Result, PHYSICAL_TOL, SYMMETRY_TOL};

/// Standard-form parameters of a fully symmetric block:
/// `beta = diag(b, b)`, `eps = diag(e1, e2)` on `n_modes` modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricBlockParams {
    pub b: f64,
    pub e1: f64,
    pub e2: f64,
    #[serde(rename = "n")]
    pub n_modes: usize,
}

impl SymmetricBlockParams {
    pub fn new(b: f64, e1: f64, e2: f64, n_modes: usize) -> Self {
        Self { b, e1, e2, n_modes }
    }

    pub fn block(&self) -> SymmetricBlock {
        SymmetricBlock {
            beta: Matrix2::new(self.b, 0.0, 0.0, self.b),
            eps: Matrix2::new(self.e1, 0.0, 0.0, self.e2),
            n_modes: self.n_modes,
        }
    }

    /// `(b - e1)(b - e2)`.
    pub fn nu_minus_sq(&self) -> f64 {
        (self.b - self.e1) * (self.b - self.e2)
    }

    /// `(b + (N-1) e1)(b + (N-1) e2)`.
    pub fn nu_plus_n_sq(&self) -> f64 {
        let m = (self.n_modes as f64) - 1.0;
        (self.b + m * self.e1) * (self.b + m * self.e2)
    }

    pub fn with_modes(&self, n_modes: usize) -> Self {
        Self { n_modes, ..*self }
    }
}

/// A fully symmetric block with arbitrary (not necessarily standard-form)
/// `2x2` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlock")]
pub struct SymmetricBlock {
    #[serde(with = "crate::mat2")]
    pub beta: Matrix2<f64>,
    #[serde(with = "crate::mat2")]
    pub eps: Matrix2<f64>,
    #[serde(rename = "n")]
    pub n_modes: usize,
}

#[derive(Deserialize)]
struct RawBlock {
    #[serde(with = "crate::mat2")]
    beta: Matrix2<f64>,
    #[serde(with = "crate::mat2")]
    eps: Matrix2<f64>,
    n: usize,
}

impl TryFrom<RawBlock> for SymmetricBlock {
    type Error = Error;

    fn try_from(raw: RawBlock) -> Result<Self> {
        Self::new(raw.beta, raw.eps, raw.n)
    }
}

fn check_symmetric2(m: &Matrix2<f64>, name: &str) -> Result<()> {
    let diff = (m[(0, 1)] - m[(1, 0)]).abs();
    if !(diff <= SYMMETRY_TOL) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be symmetric (asymmetry {diff:e})"
        )));
    }
    Ok(())
}

fn positive_definite2(m: &Matrix2<f64>) -> bool {
    m[(0, 0)] > 0.0 && m.determinant() > 0.0
}

fn symmetrized(m: Matrix2<f64>) -> Matrix2<f64> {
    (m + m.transpose()) * 0.5
}

impl SymmetricBlock {
    pub fn new(beta: Matrix2<f64>, eps: Matrix2<f64>, n_modes: usize) -> Result<Self> {
        check_symmetric2(&beta, "beta")?;
        check_symmetric2(&eps, "eps")?;
        if n_modes == 0 {
            return Err(Error::InvalidParameter(
                "a block needs at least one mode".into(),
            ));
        }
        Ok(Self {
            beta: symmetrized(beta),
            eps: symmetrized(eps),
            n_modes,
        })
    }

    /// Reads `beta` and `eps` off a covariance matrix, checking that every
    /// diagonal block equals `beta` and every off-diagonal block equals `eps`
    /// within `tol`.
    pub fn from_cm(cm: &CovarianceMatrix, tol: f64) -> Result<Self> {
        let n = cm.n_modes();
        let beta = cm.block(0, 0);
        let eps = if n > 1 {
            cm.block(0, 1)
        } else {
            Matrix2::zeros()
        };
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { beta } else { eps };
                let diff = (cm.block(i, j) - expected).amax();
                if !(diff <= tol) {
                    return Err(Error::InvalidParameter(format!(
                        "not fully symmetric: block ({i}, {j}) deviates by {diff:e}"
                    )));
                }
            }
        }
        Self::new(beta, eps, n)
    }

    pub fn with_modes(&self, n_modes: usize) -> Self {
        Self { n_modes, ..*self }
    }

    /// `det(beta - eps)`: square of the `(N-1)`-fold degenerate eigenvalue.
    pub fn degenerate_nu_sq(&self) -> f64 {
        (self.beta - self.eps).determinant()
    }

    /// `det(beta + (N-1) eps)`: square of the collective eigenvalue.
    pub fn collective_nu_sq(&self) -> f64 {
        (self.beta + self.eps * (self.n_modes as f64 - 1.0)).determinant()
    }

    /// Invariants `(mu_{beta^2}, Delta_{beta^2})` of the two-mode reduction.
    pub fn two_mode_invariants(&self) -> (f64, f64) {
        let det2 = (self.beta - self.eps).determinant() * (self.beta + self.eps).determinant();
        let delta2 = 2.0 * (self.beta.determinant() + self.eps.determinant());
        (det2.sqrt().recip(), delta2)
    }

    fn check_positive(&self) -> Result<()> {
        if self.n_modes >= 2 && !positive_definite2(&(self.beta - self.eps)) {
            return Err(Error::UnphysicalParameters(
                "beta - eps is not positive definite".into(),
            ));
        }
        if !positive_definite2(&(self.beta + self.eps * (self.n_modes as f64 - 1.0))) {
            return Err(Error::UnphysicalParameters(
                "beta + (N-1) eps is not positive definite".into(),
            ));
        }
        Ok(())
    }

    /// Checks physicality from the closed-form spectrum.
    pub fn check_physical(&self) -> Result<()> {
        let spectrum = self.spectrum()?;
        if spectrum.min() < 1.0 - PHYSICAL_TOL {
            return Err(Error::Unphysical {
                min_nu: spectrum.min(),
            });
        }
        Ok(())
    }

    /// Closed-form spectrum `{nu_- x (N-1), nu_+^(N)}`.
    pub fn spectrum(&self) -> Result<SymplecticSpectrum> {
        self.check_positive()?;
        let mut values = vec![self.degenerate_nu_sq().sqrt(); self.n_modes - 1];
        values.push(self.collective_nu_sq().sqrt());
        Ok(SymplecticSpectrum::new(values))
    }

    /// Global purity `(nu_-^{N-1} nu_+^(N))^{-1}`.
    pub fn purity(&self) -> Result<f64> {
        self.check_positive()?;
        let m = self.n_modes as f64 - 1.0;
        let ln_inv = if self.n_modes > 1 {
            0.5 * m * self.degenerate_nu_sq().ln()
        } else {
            0.0
        } + 0.5 * self.collective_nu_sq().ln();
        Ok((-ln_inv).exp())
    }

    /// Assembles the covariance matrix without any physicality check.
    pub fn cm(&self) -> CovarianceMatrix {
        CovarianceMatrix::from_blocks(
            self.n_modes,
            |i, j| if i == j { self.beta } else { self.eps },
        )
        .expect("symmetric blocks assemble into a symmetric matrix")
    }
}

/// Fully symmetric covariance matrix from standard-form parameters.
pub fn build_fully_symmetric(params: &SymmetricBlockParams) -> Result<CovarianceMatrix> {
    let block = params.block();
    block.check_physical()?;
    Ok(block.cm())
}

/// Closed-form spectrum of a fully symmetric state from its standard-form
/// parameters.
pub fn fs_spectrum(params: &SymmetricBlockParams) -> Result<SymplecticSpectrum> {
    let SymmetricBlockParams { b, e1, e2, n_modes } = *params;
    if n_modes == 0 {
        return Err(Error::InvalidParameter("n_modes must be at least 1".into()));
    }
    let m = n_modes as f64 - 1.0;
    if n_modes >= 2 && !(b - e1 > 0.0 && b - e2 > 0.0) {
        return Err(Error::UnphysicalParameters(format!(
            "(b - e1, b - e2) = ({}, {}) must both be positive",
            b - e1,
            b - e2
        )));
    }
    if !(b + m * e1 > 0.0 && b + m * e2 > 0.0) {
        return Err(Error::UnphysicalParameters(format!(
            "(b + (N-1) e1, b + (N-1) e2) = ({}, {}) must both be positive",
            b + m * e1,
            b + m * e2
        )));
    }
    let mut values = vec![params.nu_minus_sq().sqrt(); n_modes - 1];
    values.push(params.nu_plus_n_sq().sqrt());
    Ok(SymplecticSpectrum::new(values))
}

/// `nu_+^(N)` from the single-mode purity and the two-mode pair:
///
/// ```text
/// nu_+^(N)^2 = -N(N-2)/mu_beta^2 + (N-1)/2 * (N nu_+^2 + (N-2) nu_-^2)
/// ```
///
/// Here `nu_+^2 = det(beta + eps)` and `nu_-^2 = det(beta - eps)`.
pub fn nu_plus_of_n(mu_beta: f64, nu_plus: f64, nu_minus: f64, n_modes: usize) -> Result<f64> {
    let n = n_modes as f64;
    let sq = -n * (n - 2.0) / (mu_beta * mu_beta)
        + 0.5 * (n - 1.0) * (n * nu_plus * nu_plus + (n - 2.0) * nu_minus * nu_minus);
    if !(sq >= 0.0) {
        return Err(Error::InvalidInvariants(format!(
            "nu_+^(N)^2 = {sq} is negative"
        )));
    }
    Ok(sq.sqrt())
}

/// Two-mode symplectic pair from the invariants `(mu, Delta)`:
/// `2 nu_-/+^2 = Delta -/+ sqrt(Delta^2 - 4 / mu^2)`.
///
/// The smaller root is evaluated as `1 / (mu^2 nu_+^2)` to avoid cancellation.
pub fn two_mode_nus(mu: f64, delta: f64) -> Result<(f64, f64)> {
    if !(mu > 0.0 && delta > 0.0) || !mu.is_finite() || !delta.is_finite() {
        return Err(Error::InvalidInvariants(format!(
            "need mu > 0 and Delta > 0, got mu = {mu}, Delta = {delta}"
        )));
    }
    let inv_mu_sq = (mu * mu).recip();
    let disc = delta * delta - 4.0 * inv_mu_sq;
    if disc < -1e-9 * delta * delta {
        return Err(Error::InvalidInvariants(format!(
            "Delta^2 - 4/mu^2 = {disc} is negative (mu = {mu}, Delta = {delta})"
        )));
    }
    let plus_sq = 0.5 * (delta + disc.max(0.0).sqrt());
    let minus_sq = inv_mu_sq / plus_sq;
    Ok((minus_sq.sqrt(), plus_sq.sqrt()))
}

/// `(nu_-^{N-1} nu_+^(N))^{-1}` from standard-form parameters.
pub fn global_purity_fs(params: &SymmetricBlockParams) -> Result<f64> {
    let spectrum = fs_spectrum(params)?;
    Ok(spectrum.values().iter().map(|v| v.recip()).product())
}

/// The `N` coupled modes of a `1 x N` state, in either parameterisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockSpec {
    Standard(SymmetricBlockParams),
    General(SymmetricBlock),
}

impl BlockSpec {
    pub fn block(&self) -> SymmetricBlock {
        match self {
            BlockSpec::Standard(p) => p.block(),
            BlockSpec::General(b) => *b,
        }
    }

    pub fn n_modes(&self) -> usize {
        match self {
            BlockSpec::Standard(p) => p.n_modes,
            BlockSpec::General(b) => b.n_modes,
        }
    }
}

/// A single mode `alpha` coupled through the same `gamma` to every mode of a
/// fully symmetric `N`-mode block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnePlusNState {
    #[serde(with = "crate::mat2")]
    pub alpha: Matrix2<f64>,
    #[serde(with = "crate::mat2")]
    pub gamma: Matrix2<f64>,
    pub block: BlockSpec,
}

impl OnePlusNState {
    pub fn new(alpha: Matrix2<f64>, gamma: Matrix2<f64>, block: BlockSpec) -> Self {
        Self {
            alpha,
            gamma,
            block,
        }
    }

    /// Views a fully symmetric `(k+1)`-mode state as one mode against the
    /// other `k`.
    pub fn split_fully_symmetric(block: &SymmetricBlock, k: usize) -> Self {
        Self {
            alpha: block.beta,
            gamma: block.eps,
            block: BlockSpec::General(block.with_modes(k)),
        }
    }

    /// Size `N` of the symmetric block.
    pub fn n(&self) -> usize {
        self.block.n_modes()
    }

    /// Assembles the `(N+1)`-mode matrix without any physicality check.
    pub fn cm(&self) -> Result<CovarianceMatrix> {
        check_symmetric2(&self.alpha, "alpha")?;
        let block = self.block.block();
        let alpha = symmetrized(self.alpha);
        CovarianceMatrix::from_blocks(block.n_modes + 1, |i, j| match (i, j) {
            (0, 0) => alpha,
            (0, _) => self.gamma,
            _ if i == j => block.beta,
            _ => block.eps,
        })
    }
}

/// Global and local invariants of a `1 x N` state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnePlusNInvariants {
    /// `det alpha + 2N det gamma`.
    pub delta_ag: f64,
    /// `N (det beta + (N-1) det eps)`.
    pub delta_bn: f64,
    /// `det alpha - 2N det gamma`, the partially transposed `delta_ag`.
    pub delta_ag_tilde: f64,
    pub mu_alpha: f64,
    pub mu_beta_n: f64,
    pub mu_sigma: f64,
    /// Degenerate eigenvalue `sqrt(det(beta - eps))` of the block.
    pub nu_minus: f64,
}

/// Assembles a `1 x N` state and checks it numerically.
pub fn build_one_plus_n(state: &OnePlusNState) -> Result<CovarianceMatrix> {
    let cm = state.cm()?;
    let report = validate(&cm);
    match report.min_nu {
        None => Err(Error::NotPositiveDefinite),
        Some(min_nu) if !report.is_physical => Err(Error::Unphysical { min_nu }),
        Some(_) => Ok(cm),
    }
}

pub fn one_plus_n_invariants(state: &OnePlusNState) -> Result<OnePlusNInvariants> {
    let block = state.block.block();
    block.check_physical()?;
    let n = block.n_modes as f64;
    let det_alpha = state.alpha.determinant();
    if !(state.alpha[(0, 0)] > 0.0 && det_alpha > 0.0) {
        return Err(Error::UnphysicalParameters(
            "alpha is not positive definite".into(),
        ));
    }
    let det_gamma = state.gamma.determinant();
    let ln_det_sigma = state.cm()?.ln_det()?;
    Ok(OnePlusNInvariants {
        delta_ag: det_alpha + 2.0 * n * det_gamma,
        delta_bn: n * (block.beta.determinant() + (n - 1.0) * block.eps.determinant()),
        delta_ag_tilde: det_alpha - 2.0 * n * det_gamma,
        mu_alpha: det_alpha.sqrt().recip(),
        mu_beta_n: block.purity()?,
        mu_sigma: (-0.5 * ln_det_sigma).exp(),
        nu_minus: block.degenerate_nu_sq().sqrt(),
    })
}

impl OnePlusNInvariants {
    /// `nu_-^{N-1} mu`, evaluated in log space.
    pub(crate) fn scaled_purity(&self, n: usize, mu: f64) -> f64 {
        ((n as f64 - 1.0) * self.nu_minus.ln() + mu.ln()).exp()
    }

    /// Seralian of the whole state, `Delta_ag + Delta_bN`.
    pub fn delta_sigma(&self) -> f64 {
        self.delta_ag + self.delta_bn
    }
}

/// Closed-form spectrum `{nu_- x (N-1), n_-, n_+}` of a `1 x N` state.
pub fn one_plus_n_spectrum(state: &OnePlusNState) -> Result<SymplecticSpectrum> {
    let n = state.n();
    let inv = one_plus_n_invariants(state)?;
    let mu_b = inv.scaled_purity(n, inv.mu_beta_n);
    let x = inv.delta_ag + (mu_b * mu_b).recip();
    let (n_minus, n_plus) = two_mode_nus(inv.scaled_purity(n, inv.mu_sigma), x)?;
    let mut values = vec![inv.nu_minus; n - 1];
    values.extend([n_minus, n_plus]);
    Ok(SymplecticSpectrum::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{reduce, seralian, symplectic_spectrum_numeric};
    use approx::assert_relative_eq;

    fn tms_params() -> SymmetricBlockParams {
        let r = 1f64;
        SymmetricBlockParams::new(r.cosh(), r.sinh(), -r.sinh(), 2)
    }

    fn permute(cm: &CovarianceMatrix, perm: &[usize]) -> CovarianceMatrix {
        reduce(cm, perm).unwrap()
    }

    #[test]
    fn vacuum_block_is_identity() {
        let cm = build_fully_symmetric(&SymmetricBlockParams::new(1.0, 0.0, 0.0, 3)).unwrap();
        assert_eq!(cm, CovarianceMatrix::identity(3));
    }

    #[test]
    fn two_mode_squeezed_from_params() {
        let p = SymmetricBlockParams::new(1.5431, 1.1752, -1.1752, 2);
        let cm = build_fully_symmetric(&p).unwrap();
        for v in symplectic_spectrum_numeric(&cm).unwrap().values() {
            assert!((v - 1.0).abs() < 1e-4, "{v}");
        }
        let exact = build_fully_symmetric(&tms_params()).unwrap();
        for v in symplectic_spectrum_numeric(&exact).unwrap().values() {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(crate::purity(&exact).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fully_symmetric_is_permutation_invariant() {
        let cm = build_fully_symmetric(&SymmetricBlockParams::new(2.0, 0.4, -0.3, 4)).unwrap();
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
            assert_eq!(permute(&cm, &perm), cm);
        }
    }

    #[test]
    fn unphysical_params_rejected() {
        assert!(matches!(
            build_fully_symmetric(&SymmetricBlockParams::new(0.5, 0.0, 0.0, 2)),
            Err(Error::Unphysical { .. })
        ));
        assert!(matches!(
            fs_spectrum(&SymmetricBlockParams::new(1.0, 2.0, 0.0, 2)),
            Err(Error::UnphysicalParameters(_))
        ));
        // Both factors negative still gives a positive product; must be rejected.
        assert!(fs_spectrum(&SymmetricBlockParams::new(1.0, 2.0, 3.0, 2)).is_err());
    }

    #[test]
    fn fs_spectrum_uncoupled_thermal() {
        let s = fs_spectrum(&SymmetricBlockParams::new(2.5, 0.0, 0.0, 4)).unwrap();
        assert_eq!(s.values(), &[2.5; 4]);
    }

    #[test]
    fn fs_spectrum_matches_oracle() {
        for p in [
            SymmetricBlockParams::new(2.0, 0.4, -0.3, 5),
            SymmetricBlockParams::new(3.0, -0.1, -0.12, 7),
            SymmetricBlockParams::new(1.3, 0.2, 0.1, 1),
            SymmetricBlockParams::new(4.0, 2.5, -0.3, 12),
        ] {
            let analytic = fs_spectrum(&p).unwrap();
            let numeric = symplectic_spectrum_numeric(&build_fully_symmetric(&p).unwrap()).unwrap();
            assert!(analytic.max_rel_diff(&numeric) < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn nu_plus_of_n_examples() {
        // N = 2 returns nu_+; N = 1 returns 1/mu_beta.
        assert_relative_eq!(
            nu_plus_of_n(0.3, 2.7, 1.4, 2).unwrap(),
            2.7,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            nu_plus_of_n(0.25, 2.7, 1.4, 1).unwrap(),
            4.0,
            epsilon = 1e-14
        );

        let p = SymmetricBlockParams::new(2.2, 0.5, -0.35, 5);
        let nu_plus = (p.with_modes(2).nu_plus_n_sq()).sqrt();
        let via_purity = nu_plus_of_n(1.0 / p.b, nu_plus, p.nu_minus_sq().sqrt(), 5).unwrap();
        assert_relative_eq!(via_purity, p.nu_plus_n_sq().sqrt(), max_relative = 1e-10);
        assert!(nu_plus_of_n(1.0, 0.1, 0.1, 5).is_err());
    }

    #[test]
    fn two_mode_nus_examples() {
        let (a, b) = two_mode_nus(1.0, 2.0).unwrap();
        assert_relative_eq!(a, 1.0, epsilon = 1e-12);
        assert_relative_eq!(b, 1.0, epsilon = 1e-12);

        let (a, b) = two_mode_nus(1.0 / 9.0, 18.0).unwrap();
        assert_relative_eq!(a, 3.0, epsilon = 1e-12);
        assert_relative_eq!(b, 3.0, epsilon = 1e-12);

        assert!(matches!(
            two_mode_nus(1.0, 1.0),
            Err(Error::InvalidInvariants(_))
        ));
        assert!(two_mode_nus(0.0, 1.0).is_err());

        // e1 + e2 >= 0, so the degenerate nu_- is the smaller of the pair.
        let p = SymmetricBlockParams::new(2.0, 0.6, 0.2, 2);
        let (mu2, delta2) = p.block().two_mode_invariants();
        let (lo, hi) = two_mode_nus(mu2, delta2).unwrap();
        assert_relative_eq!(lo, p.nu_minus_sq().sqrt(), max_relative = 1e-12);
        assert_relative_eq!(hi, p.nu_plus_n_sq().sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn global_purity_examples() {
        assert_relative_eq!(
            global_purity_fs(&SymmetricBlockParams::new(1.0, 0.0, 0.0, 5)).unwrap(),
            1.0
        );
        assert_relative_eq!(
            global_purity_fs(&SymmetricBlockParams::new(3.0, 0.0, 0.0, 2)).unwrap(),
            1.0 / 9.0,
            max_relative = 1e-14
        );
        let p = SymmetricBlockParams::new(2.0, 0.4, -0.3, 6);
        let numeric = crate::purity(&build_fully_symmetric(&p).unwrap()).unwrap();
        assert_relative_eq!(global_purity_fs(&p).unwrap(), numeric, max_relative = 1e-9);
        assert_relative_eq!(p.block().purity().unwrap(), numeric, max_relative = 1e-9);
    }

    fn sample_state() -> OnePlusNState {
        OnePlusNState::new(
            Matrix2::new(2.0, 0.0, 0.0, 1.2),
            Matrix2::new(0.3, 0.0, 0.0, -0.2),
            BlockSpec::Standard(SymmetricBlockParams::new(1.8, 0.3, -0.2, 4)),
        )
    }

    #[test]
    fn product_state_has_block_diagonal_structure() {
        let state = OnePlusNState::new(
            Matrix2::identity(),
            Matrix2::zeros(),
            BlockSpec::Standard(SymmetricBlockParams::new(1.5, 0.2, 0.1, 3)),
        );
        let cm = build_one_plus_n(&state).unwrap();
        for j in 1..4 {
            assert_eq!(cm.block(0, j), Matrix2::zeros());
        }
        let inv = one_plus_n_invariants(&state).unwrap();
        assert_eq!(inv.delta_ag, 1.0);
        assert_eq!(inv.delta_ag_tilde, 1.0);

        // Spectra concatenate: {nu_- x 2, 1/mu_alpha, nu_+^(3)} sorted.
        let p = SymmetricBlockParams::new(1.5, 0.2, 0.1, 3);
        let mut expected = fs_spectrum(&p).unwrap().values().to_vec();
        expected.push(1.0);
        let s = one_plus_n_spectrum(&state).unwrap();
        assert!(s.max_rel_diff(&SymplecticSpectrum::new(expected)) < 1e-12);
    }

    #[test]
    fn ghz_as_one_plus_n_is_identical() {
        let p = SymmetricBlockParams::new(1.5, 0.3, -0.2, 4);
        let full = build_fully_symmetric(&p).unwrap();
        let split = OnePlusNState::split_fully_symmetric(&p.block(), 3);
        assert_eq!(build_one_plus_n(&split).unwrap(), full);
    }

    #[test]
    fn one_plus_n_permutation_invariance() {
        let cm = build_one_plus_n(&sample_state()).unwrap();
        assert_eq!(permute(&cm, &[0, 3, 1, 4, 2]), cm);
    }

    #[test]
    fn one_plus_n_seralian_and_spectrum() {
        let state = sample_state();
        let cm = build_one_plus_n(&state).unwrap();
        let inv = one_plus_n_invariants(&state).unwrap();
        let oracle = symplectic_spectrum_numeric(&cm).unwrap();
        assert_relative_eq!(seralian(&cm), inv.delta_sigma(), max_relative = 1e-12);
        assert_relative_eq!(
            oracle.sum_of_squares(),
            inv.delta_sigma(),
            max_relative = 1e-9
        );
        let analytic = one_plus_n_spectrum(&state).unwrap();
        assert!(analytic.max_rel_diff(&oracle) < 1e-9);
    }

    #[test]
    fn invariants_tilde_identity_and_sign() {
        let state = sample_state();
        let inv = one_plus_n_invariants(&state).unwrap();
        assert!(state.gamma.determinant() < 0.0);
        assert!(inv.delta_ag_tilde > inv.delta_ag);
        let rhs = -inv.delta_ag + 2.0 / (inv.mu_alpha * inv.mu_alpha);
        assert!((inv.delta_ag_tilde - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn unphysical_assembly_reports_min_nu() {
        let state = OnePlusNState::new(
            Matrix2::identity(),
            Matrix2::new(0.9, 0.0, 0.0, 0.9),
            BlockSpec::Standard(SymmetricBlockParams::new(1.0, 0.0, 0.0, 2)),
        );
        assert!(matches!(
            build_one_plus_n(&state),
            Err(Error::Unphysical { .. }) | Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn from_cm_recovers_blocks() {
        let p = SymmetricBlockParams::new(2.0, 0.4, -0.3, 4);
        let block = SymmetricBlock::from_cm(&build_fully_symmetric(&p).unwrap(), 0.0).unwrap();
        assert_eq!(block, p.block());
        assert!(
            SymmetricBlock::from_cm(&build_one_plus_n(&sample_state()).unwrap(), 1e-12).is_err()
        );
    }

    #[test]
    fn params_json_forms() {
        let p: SymmetricBlockParams =
            serde_json::from_str(r#"{"b": 1.5, "e1": 0.2, "e2": -0.1, "n": 3}"#).unwrap();
        assert_eq!(p, SymmetricBlockParams::new(1.5, 0.2, -0.1, 3));

        let s: OnePlusNState = serde_json::from_str(
            r#"{"alpha": [[2, 0], [0, 1.2]], "gamma": [[0.3, 0], [0, -0.2]],
                "block": {"b": 1.8, "e1": 0.3, "e2": -0.2, "n": 4}}"#,
        )
        .unwrap();
        assert_eq!(s, sample_state());

        let g: OnePlusNState = serde_json::from_str(
            r#"{"alpha": [[2, 0], [0, 1.2]], "gamma": [[0.3, 0], [0, -0.2]],
                "block": {"beta": [[1.8, 0.1], [0.1, 1.8]], "eps": [[0.3, 0], [0, -0.2]], "n": 4}}"#,
        )
        .unwrap();
        assert!(matches!(g.block, BlockSpec::General(_)));
        let back: OnePlusNState =
            serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);

        let asym = r#"{"beta": [[1.8, 0.1], [0.0, 1.8]], "eps": [[0, 0], [0, 0]], "n": 2}"#;
        assert!(serde_json::from_str::<SymmetricBlock>(asym).is_err());
    }
}
