//! Numeric witnesses tying the closed forms to the reference spectrum.
//!
//! * explicit eigenvectors for the `(N-1)`-fold degenerate eigenvalue of a
//!   standard-form fully symmetric block,
//! * the seralian decomposition of a `1 x N` state,
//! * a seeded random corpus on which every identity is checked.

use std::fmt;
use std::io::{self, Write};

use nalgebra::{DMatrix, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance::{
    log_negativity_numeric, rel_diff, seralian, symplectic_form, symplectic_spectrum_numeric,
    validate, CovarianceMatrix, ModePartition,
};
use crate::entanglement::{equivalent_two_mode, negativity_from_equivalent};
use crate::symmetric::{
    fs_spectrum, nu_plus_of_n, one_plus_n_invariants, one_plus_n_spectrum, BlockSpec,
    OnePlusNState, SymmetricBlock, SymmetricBlockParams,
};
use crate::{Error, Result};

/// Default tolerance for every identity except the two `nu_+^(N)` forms.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for the two closed forms of `nu_+^(N)`.
pub const NU_PLUS_TOL: f64 = 1e-10;
/// Relative singular-value threshold separating independent directions.
pub const RANK_TOL: f64 = 1e-6;

/// A candidate eigenvector of `i Omega sigma`, stored as interleaved
/// `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenpairCheck {
    pub vector: Vec<f64>,
    pub eigenvalue: f64,
    /// Max-norm of `(i Omega sigma) v - nu v`.
    pub residual: f64,
}

impl EigenpairCheck {
    pub fn norm(&self) -> f64 {
        self.vector.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn relative_residual(&self) -> f64 {
        self.residual / self.norm()
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.residual < tol * self.norm()
    }
}

/// `(i Omega sigma) v` for an interleaved complex vector.
fn i_omega_sigma_apply(cm: &CovarianceMatrix, v: &[f64]) -> Vec<f64> {
    let dim = cm.dim();
    let re = DMatrix::from_fn(dim, 1, |r, _| v[2 * r]);
    let im = DMatrix::from_fn(dim, 1, |r, _| v[2 * r + 1]);
    let omega_sigma = symplectic_form(cm.n_modes()) * cm.entries();
    let (a, b) = (&omega_sigma * re, &omega_sigma * im);
    // i (a + i b) = -b + i a
    (0..dim).flat_map(|r| [-b[r], a[r]]).collect()
}

fn check_eigenpair(cm: &CovarianceMatrix, vector: Vec<f64>, eigenvalue: f64) -> EigenpairCheck {
    let image = i_omega_sigma_apply(cm, &vector);
    let residual = image
        .iter()
        .zip(&vector)
        .map(|(w, v)| (w - eigenvalue * v).abs())
        .fold(0.0, f64::max);
    EigenpairCheck {
        vector,
        eigenvalue,
        residual,
    }
}

/// Eigenvectors for the degenerate eigenvalue on the mode pairs
/// `(first, first + j)`, embedded in a matrix with `n_total` modes.
fn pair_vectors(
    params: &SymmetricBlockParams,
    n_total: usize,
    first: usize,
) -> Result<(f64, Vec<Vec<f64>>)> {
    let SymmetricBlockParams { b, e2, n_modes, .. } = *params;
    if n_modes < 2 {
        return Err(Error::InvalidParameter(
            "degeneracy needs at least 2 modes".into(),
        ));
    }
    let nu_sq = params.nu_minus_sq();
    if !(nu_sq > 0.0) || !(b - e2 > 0.0) {
        return Err(Error::UnphysicalParameters(format!("nu_-^2 = {nu_sq}")));
    }
    let nu = nu_sq.sqrt();
    // x-slot coefficient (b - e2)/nu = nu/(b - e1) for omega = [[0, 1], [-1, 0]].
    let c = (b - e2) / nu;
    let vectors = (1..n_modes)
        .map(|j| {
            let mut v = vec![0.0; 4 * n_total];
            let (p, q) = (first, first + j);
            // mode p: (-i c, -1); mode q: (+i c, +1)
            v[4 * p + 1] = -c;
            v[4 * p + 2] = -1.0;
            v[4 * q + 1] = c;
            v[4 * q + 2] = 1.0;
            v
        })
        .collect();
    Ok((nu, vectors))
}

/// The `N - 1` explicit eigenvectors of the degenerate eigenvalue of a
/// standard-form fully symmetric state, each checked by direct
/// multiplication.
pub fn degenerate_eigenvectors(params: &SymmetricBlockParams) -> Result<Vec<EigenpairCheck>> {
    let (nu, vectors) = pair_vectors(params, params.n_modes, 0)?;
    let cm = params.block().cm();
    Ok(vectors
        .into_iter()
        .map(|v| check_eigenpair(&cm, v, nu))
        .collect())
}

/// The same vectors padded with zeros on the single mode of a `1 x N`
/// state whose block is in standard form.
pub fn degenerate_eigenvectors_one_plus_n(state: &OnePlusNState) -> Result<Vec<EigenpairCheck>> {
    let BlockSpec::Standard(params) = state.block else {
        return Err(Error::InvalidParameter(
            "explicit eigenvectors need a standard-form block".into(),
        ));
    };
    let (nu, vectors) = pair_vectors(&params, params.n_modes + 1, 1)?;
    let cm = state.cm()?;
    Ok(vectors
        .into_iter()
        .map(|v| check_eigenpair(&cm, v, nu))
        .collect())
}

/// Complex rank of the stacked vectors and their singular values
/// (descending), computed on the real `[[Re, -Im], [Im, Re]]` embedding whose
/// singular values are the complex ones, each doubled.
pub fn stacked_rank(checks: &[EigenpairCheck]) -> (usize, Vec<f64>) {
    let Some(first) = checks.first() else {
        return (0, Vec::new());
    };
    let dim = first.vector.len() / 2;
    let m = checks.len();
    let real = DMatrix::from_fn(2 * dim, 2 * m, |r, c| {
        let (row, top) = (r % dim, r < dim);
        let (col, left) = (c % m, c < m);
        let v = &checks[col].vector;
        let (re, im) = (v[2 * row], v[2 * row + 1]);
        match (top, left) {
            (true, true) | (false, false) => re,
            (true, false) => -im,
            (false, true) => im,
        }
    });
    let mut sv: Vec<f64> = SVD::new(real, false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let sv: Vec<f64> = sv.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * top).count();
    (rank, sv)
}

/// Number of numeric symplectic eigenvalues within `tol` (relative) of `nu`.
pub fn degenerate_multiplicity(cm: &CovarianceMatrix, nu: f64, tol: f64) -> Result<usize> {
    let spectrum = symplectic_spectrum_numeric(cm)?;
    Ok(spectrum
        .values()
        .iter()
        .filter(|&&v| rel_diff(v, nu) <= tol)
        .count())
}

/// `|Delta_sigma - Delta_ag - (N-1) nu_-^2 - (nu_-^{N-1} mu_{beta^N})^{-2}|`
/// with `Delta_sigma` summed from the blocks of the assembled matrix.
pub fn check_seralian_identity(state: &OnePlusNState) -> Result<f64> {
    let n = state.n();
    let inv = one_plus_n_invariants(state)?;
    let delta_sigma = seralian(&state.cm()?);
    let scaled = inv.scaled_purity(n, inv.mu_beta_n);
    let rhs = inv.delta_ag + (n as f64 - 1.0) * inv.nu_minus.powi(2) + (scaled * scaled).recip();
    Ok((delta_sigma - rhs).abs())
}

/// One member of the random validation corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusState {
    pub index: usize,
    /// Standard-form parameters the block was drawn from, before any local
    /// symplectic transformation.
    pub params: SymmetricBlockParams,
    pub state: OnePlusNState,
}

/// Largest block size in the random corpus.
pub const CORPUS_MAX_N: usize = 20;

/// Seeded generator of random physical `1 x N` states.
///
/// Draws `b` in `[1, 5]`, `e_i` in `[-b, b]`, a squeezed thermal
/// `alpha = diag(a s, a / s)` and a diagonal coupling, keeping only
/// assemblies that pass the numeric physicality test. Every other state is
/// moved out of standard form by a random local symplectic map (the same on
/// all block modes).
pub struct CorpusGenerator {
    rng: ChaCha8Rng,
    next_index: usize,
    /// Draws where the closed-form and numeric physicality tests of the
    /// block disagreed.
    pub physicality_disagreements: usize,
}

impl CorpusGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_index: 0,
            physicality_disagreements: 0,
        }
    }

    fn random_local_symplectic(&mut self) -> nalgebra::Matrix2<f64> {
        let rot = |t: f64| nalgebra::Matrix2::new(t.cos(), -t.sin(), t.sin(), t.cos());
        let theta = self.rng.random_range(0.0..std::f64::consts::TAU);
        let phi = self.rng.random_range(0.0..std::f64::consts::TAU);
        let r: f64 = self.rng.random_range(-0.6..0.6);
        let squeeze = nalgebra::Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
        rot(theta) * squeeze * rot(phi)
    }

    pub fn next_state(&mut self) -> CorpusState {
        let index = self.next_index;
        self.next_index += 1;
        let n = self.rng.random_range(1..=CORPUS_MAX_N);
        let general = index % 2 == 1;
        loop {
            let b = self.rng.random_range(1.0..=5.0);
            let e1 = self.rng.random_range(-b..=b);
            let e2 = self.rng.random_range(-b..=b);
            let params = SymmetricBlockParams::new(b, e1, e2, n);

            let a = self.rng.random_range(1.0..=3.0);
            let s: f64 = self.rng.random_range(-0.7..=0.7f64).exp();
            // Coupling scale follows the collective mode.
            let collective = b + (n as f64 - 1.0) * e1.abs().max(e2.abs());
            let scale = (a * collective / n as f64).sqrt();
            let g1 = self.rng.random_range(-1.0..=1.0) * scale;
            let g2 = self.rng.random_range(-1.0..=1.0) * scale;

            let block = params.block();
            let analytic = block.check_physical().is_ok();
            if fs_spectrum(&params).is_err() {
                continue;
            }
            let numeric = validate(&block.cm()).is_physical;
            if analytic != numeric {
                self.physicality_disagreements += 1;
            }
            if !analytic {
                continue;
            }

            let alpha = nalgebra::Matrix2::new(a * s, 0.0, 0.0, a / s);
            let gamma = nalgebra::Matrix2::new(g1, 0.0, 0.0, g2);
            let state = if general {
                let t = self.random_local_symplectic();
                let u = self.random_local_symplectic();
                let moved = SymmetricBlock::new(
                    u * block.beta * u.transpose(),
                    u * block.eps * u.transpose(),
                    n,
                )
                .expect("congruence keeps blocks symmetric");
                OnePlusNState::new(
                    t * alpha * t.transpose(),
                    t * gamma * u.transpose(),
                    BlockSpec::General(moved),
                )
            } else {
                OnePlusNState::new(alpha, gamma, BlockSpec::Standard(params))
            };
            let Ok(cm) = state.cm() else { continue };
            if validate(&cm).is_physical {
                return CorpusState {
                    index,
                    params,
                    state,
                };
            }
        }
    }
}

/// `corpus_size` states from `seed`, in index order.
pub fn generate_corpus(corpus_size: usize, seed: u64) -> (Vec<CorpusState>, usize) {
    let mut gen = CorpusGenerator::new(seed);
    let corpus = (0..corpus_size).map(|_| gen.next_state()).collect();
    (corpus, gen.physicality_disagreements)
}

/// Names of the identities checked by [`cross_validate`], in report order.
pub const IDENTITIES: [&str; 7] = [
    "fs_spectrum_vs_oracle",
    "one_plus_n_spectrum_vs_oracle",
    "negativity_equivalence",
    "nu_plus_two_forms",
    "seralian_identity",
    "degenerate_eigenpairs",
    "degenerate_rank_deficit",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub checked: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub identity: String,
    pub residual: f64,
    pub message: Option<String>,
    pub item: CorpusState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub corpus_size: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub residuals: Vec<IdentityResidual>,
    pub entangled_states: usize,
    pub physicality_disagreements: usize,
    pub failures: Vec<Failure>,
}

impl CrossValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.residuals.iter().all(|r| r.passed)
    }

    pub fn residual(&self, name: &str) -> Option<&IdentityResidual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    /// One JSON line per failing state.
    pub fn write_replay(&self, mut out: impl Write) -> io::Result<()> {
        for f in &self.failures {
            serde_json::to_writer(&mut out, f)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

impl fmt::Display for CrossValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "corpus_size {} seed {}", self.corpus_size, self.seed)?;
        for r in &self.residuals {
            writeln!(
                f,
                "{:<32} max {:.3e} tol {:.1e} over {:>5}  {}",
                r.name,
                r.max_residual,
                r.tolerance,
                r.checked,
                if r.passed { "ok" } else { "FAIL" }
            )?;
        }
        writeln!(f, "entangled states {}", self.entangled_states)?;
        writeln!(
            f,
            "physicality disagreements {}",
            self.physicality_disagreements
        )?;
        write!(f, "failures {}", self.failures.len())
    }
}

/// Residuals of one corpus item, `None` where an identity does not apply.
struct ItemResult {
    residuals: [Option<f64>; 7],
    entangled: bool,
    error: Option<(usize, String)>,
}

fn check_item(item: &CorpusState) -> ItemResult {
    let mut out = ItemResult {
        residuals: [None; 7],
        entangled: false,
        error: None,
    };
    if let Err((slot, e)) = check_item_inner(item, &mut out) {
        out.error = Some((slot, e.to_string()));
    }
    out
}

fn check_item_inner(
    item: &CorpusState,
    out: &mut ItemResult,
) -> std::result::Result<(), (usize, Error)> {
    let state = &item.state;
    let block = state.block.block();
    let n = block.n_modes;
    let at = |slot: usize| move |e: Error| (slot, e);

    let analytic = match state.block {
        BlockSpec::Standard(p) => fs_spectrum(&p),
        BlockSpec::General(b) => b.spectrum(),
    }
    .map_err(at(0))?;
    let oracle = symplectic_spectrum_numeric(&block.cm()).map_err(at(0))?;
    out.residuals[0] = Some(analytic.max_rel_diff(&oracle));

    let cm = state.cm().map_err(at(1))?;
    let analytic = one_plus_n_spectrum(state).map_err(at(1))?;
    let oracle = symplectic_spectrum_numeric(&cm).map_err(at(1))?;
    out.residuals[1] = Some(analytic.max_rel_diff(&oracle));

    let neg =
        negativity_from_equivalent(&equivalent_two_mode(state).map_err(at(2))?).map_err(at(2))?;
    let numeric = log_negativity_numeric(&cm, &ModePartition::single(0)).map_err(at(2))?;
    out.residuals[2] = Some((neg.value - numeric).abs());
    out.entangled = neg.entangled;

    let mu_beta = block.beta.determinant().sqrt().recip();
    let nu_plus = (block.beta + block.eps).determinant().sqrt();
    let nu_minus = block.degenerate_nu_sq().sqrt();
    let via_purity = nu_plus_of_n(mu_beta, nu_plus, nu_minus, n).map_err(at(3))?;
    let direct = match state.block {
        BlockSpec::Standard(p) => p.nu_plus_n_sq().sqrt(),
        BlockSpec::General(b) => b.collective_nu_sq().sqrt(),
    };
    out.residuals[3] = Some(rel_diff(via_purity, direct));

    out.residuals[4] = Some(check_seralian_identity(state).map_err(at(4))?);

    if n >= 2 {
        match state.block {
            BlockSpec::Standard(p) => {
                let mut checks = degenerate_eigenvectors(&p).map_err(at(5))?;
                checks.extend(degenerate_eigenvectors_one_plus_n(state).map_err(at(5))?);
                let worst = checks
                    .iter()
                    .map(EigenpairCheck::relative_residual)
                    .fold(0.0, f64::max);
                out.residuals[5] = Some(worst);
                let (rank, _) = stacked_rank(&checks[..n - 1]);
                out.residuals[6] = Some((n - 1 - rank) as f64);
            }
            BlockSpec::General(b) => {
                // No explicit vectors off standard form: check the
                // multiplicity of the degenerate eigenvalue instead.
                let nu = b.degenerate_nu_sq().sqrt();
                let mult = degenerate_multiplicity(&b.cm(), nu, DEFAULT_TOL).map_err(at(6))?;
                out.residuals[6] = Some((n - 1).saturating_sub(mult) as f64);
            }
        }
    }
    Ok(())
}

/// Runs every identity over a seeded corpus with the default tolerance.
pub fn cross_validate(corpus_size: usize, seed: u64) -> CrossValidationReport {
    cross_validate_with_tol(corpus_size, seed, DEFAULT_TOL)
}

/// As [`cross_validate`], with `tol` replacing the default `1e-9`.
pub fn cross_validate_with_tol(corpus_size: usize, seed: u64, tol: f64) -> CrossValidationReport {
    let (corpus, disagreements) = generate_corpus(corpus_size, seed);
    let results: Vec<ItemResult> = corpus.par_iter().map(check_item).collect();

    let tolerances = [tol, tol, tol, NU_PLUS_TOL.min(tol), tol, tol, 0.0];
    let mut max = [0.0f64; 7];
    let mut checked = [0usize; 7];
    let mut failures = Vec::new();
    let mut entangled_states = 0;
    for (item, res) in corpus.iter().zip(&results) {
        entangled_states += usize::from(res.entangled);
        for slot in 0..7 {
            if let Some(r) = res.residuals[slot] {
                checked[slot] += 1;
                max[slot] = max[slot].max(r);
                if !(r <= tolerances[slot]) {
                    failures.push(Failure {
                        identity: IDENTITIES[slot].to_string(),
                        residual: r,
                        message: None,
                        item: item.clone(),
                    });
                }
            }
        }
        if let Some((slot, msg)) = &res.error {
            checked[*slot] += 1;
            max[*slot] = f64::INFINITY;
            failures.push(Failure {
                identity: IDENTITIES[*slot].to_string(),
                residual: f64::INFINITY,
                message: Some(msg.clone()),
                item: item.clone(),
            });
        }
    }
    let residuals = (0..7)
        .map(|slot| IdentityResidual {
            name: IDENTITIES[slot].to_string(),
            max_residual: max[slot],
            tolerance: tolerances[slot],
            checked: checked[slot],
            passed: max[slot] <= tolerances[slot],
        })
        .collect();
    CrossValidationReport {
        corpus_size,
        seed,
        tolerance: tol,
        residuals,
        entangled_states,
        physicality_disagreements: disagreements,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::GhzSpec;
    use nalgebra::Matrix2;

    #[test]
    fn two_mode_squeezed_eigenpair() {
        let r = 0.8f64;
        let p = SymmetricBlockParams::new(r.cosh(), r.sinh(), -r.sinh(), 2);
        let checks = degenerate_eigenvectors(&p).unwrap();
        assert_eq!(checks.len(), 1);
        assert!(checks[0].residual < 1e-10);
        assert!((checks[0].eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_ten_modes_has_nine_independent_vectors() {
        let p = GhzSpec::new(1.5, 10).unwrap().params().unwrap();
        let checks = degenerate_eigenvectors(&p).unwrap();
        assert_eq!(checks.len(), 9);
        assert!(checks.iter().all(|c| c.passed(1e-9)));
        let (rank, sv) = stacked_rank(&checks);
        assert_eq!(rank, 9);
        assert_eq!(sv.len(), 9);
    }

    #[test]
    fn uncoupled_modes_use_b() {
        let p = SymmetricBlockParams::new(2.5, 0.0, 0.0, 3);
        let checks = degenerate_eigenvectors(&p).unwrap();
        assert!(checks
            .iter()
            .all(|c| (c.eigenvalue - 2.5).abs() < 1e-14 && c.residual < 1e-12));
    }

    #[test]
    fn literal_b_minus_e1_coefficient_fails_when_e1_ne_e2() {
        // With the x-slot coefficient (b - e1)/nu the vector is not an
        // eigenvector of i Omega sigma in (x, p) ordering unless e1 = e2.
        let p = SymmetricBlockParams::new(2.0, 0.7, -0.4, 2);
        let nu = p.nu_minus_sq().sqrt();
        let c = (p.b - p.e1) / nu;
        let v = vec![0.0, -c, -1.0, 0.0, 0.0, c, 1.0, 0.0];
        let check = check_eigenpair(&p.block().cm(), v, nu);
        assert!(check.residual > 1e-3);
        assert!(degenerate_eigenvectors(&p).unwrap()[0].residual < 1e-12);
    }

    #[test]
    fn eigenvector_errors() {
        assert!(degenerate_eigenvectors(&SymmetricBlockParams::new(2.0, 0.1, 0.1, 1)).is_err());
        assert!(degenerate_eigenvectors(&SymmetricBlockParams::new(1.0, 1.0, 0.0, 3)).is_err());
    }

    #[test]
    fn embedded_vectors_for_one_plus_n() {
        let state = OnePlusNState::new(
            Matrix2::new(2.0, 0.0, 0.0, 1.1),
            Matrix2::new(0.4, 0.0, 0.0, -0.3),
            BlockSpec::Standard(SymmetricBlockParams::new(2.0, 0.5, -0.2, 5)),
        );
        let checks = degenerate_eigenvectors_one_plus_n(&state).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.passed(1e-9)));
    }

    #[test]
    fn seralian_identity_examples() {
        let product = OnePlusNState::new(
            Matrix2::new(1.5, 0.0, 0.0, 1.5),
            Matrix2::zeros(),
            BlockSpec::Standard(SymmetricBlockParams::new(2.0, 0.4, 0.3, 6)),
        );
        assert!(check_seralian_identity(&product).unwrap() < 1e-10);

        // N = 1: Delta = det alpha + 2 det gamma + det beta.
        let one = OnePlusNState::new(
            Matrix2::new(2.0, 0.0, 0.0, 1.5),
            Matrix2::new(0.5, 0.0, 0.0, -0.5),
            BlockSpec::Standard(SymmetricBlockParams::new(1.7, 0.0, 0.0, 1)),
        );
        assert!(check_seralian_identity(&one).unwrap() < 1e-12);

        for b in [1.1, 1.5, 2.0, 5.0, 10.0] {
            let block = GhzSpec::new(b, 8).unwrap().params().unwrap().block();
            let state = OnePlusNState::split_fully_symmetric(&block, 7);
            assert!(check_seralian_identity(&state).unwrap() < 1e-9);
        }
    }

    #[test]
    fn empty_corpus_passes() {
        let report = cross_validate(0, 1);
        assert!(report.passed());
        assert!(report.failures.is_empty());
        assert!(report.residuals.iter().all(|r| r.checked == 0));
    }

    #[test]
    fn small_corpus_is_deterministic_and_passes() {
        let a = cross_validate(40, 11);
        let b = cross_validate(40, 11);
        assert_eq!(a, b);
        assert!(a.passed(), "{a}");
        assert_eq!(a.to_string(), b.to_string());
        let c = cross_validate(40, 12);
        assert_ne!(a.residuals, c.residuals);
    }

    #[test]
    fn replay_lines_round_trip() {
        let (corpus, _) = generate_corpus(2, 3);
        let report = CrossValidationReport {
            corpus_size: 2,
            seed: 3,
            tolerance: DEFAULT_TOL,
            residuals: Vec::new(),
            entangled_states: 0,
            physicality_disagreements: 0,
            failures: corpus
                .iter()
                .map(|item| Failure {
                    identity: "x".into(),
                    residual: 1.0,
                    message: None,
                    item: item.clone(),
                })
                .collect(),
        };
        let mut buf = Vec::new();
        report.write_replay(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back: Vec<Failure> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(back, report.failures);
    }
}
