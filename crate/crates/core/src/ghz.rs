//! GHZ-type pure fully symmetric states.
//!
//! An `(N+1)`-mode fully symmetric state with `beta = diag(b, b)` is pure
//! exactly when its off-diagonal block is
//!
//! ```text
//! e_i = [1 + b^2 (N-1) - N - (-1)^i sqrt((b^2 - 1)(b^2 (N+1)^2 - (N-1)^2))] / (2 b N)
//! ```
//!
//! so the whole family is indexed by `b >= 1` and the mode count.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance::CovarianceMatrix;
use crate::entanglement::{one_by_k_negativity, NegativityResult};
use crate::symmetric::{build_fully_symmetric, SymmetricBlockParams};
use crate::{Error, Result};

/// Default squeezing grid for sweeps.
pub const DEFAULT_B_GRID: [f64; 5] = [1.1, 1.5, 2.0, 5.0, 10.0];

/// Largest `N` accepted by [`scaling_table`].
pub const MAX_SWEEP_N: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzSpec {
    pub b: f64,
    /// Total number of modes, `N + 1`.
    pub total_modes: usize,
}

impl GhzSpec {
    pub fn new(b: f64, total_modes: usize) -> Result<Self> {
        if !(b >= 1.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("b = {b} must be >= 1")));
        }
        if total_modes < 2 {
            return Err(Error::InvalidParameter(format!(
                "a GHZ-type state needs at least 2 modes, got {total_modes}"
            )));
        }
        Ok(Self { b, total_modes })
    }

    pub fn params(&self) -> Result<SymmetricBlockParams> {
        let (e1, e2) = ghz_covariances(self.b, self.total_modes)?;
        Ok(SymmetricBlockParams::new(self.b, e1, e2, self.total_modes))
    }
}

/// One row of the `N`-scaling table for the `(N+1)`-mode GHZ-type state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub b: f64,
    pub n: usize,
    pub e_1x1: f64,
    #[serde(rename = "e_1xNm1")]
    pub e_1xnm1: f64,
    #[serde(rename = "e_1xN")]
    pub e_1xn: f64,
}

/// Long-format sweep record, one per `(b, N, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub b: f64,
    pub n_total: usize,
    pub k: usize,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    pub n_tilde_minus: f64,
}

/// Off-diagonal covariances `(e1, e2)` of the pure state.
pub fn ghz_covariances(b: f64, total_modes: usize) -> Result<(f64, f64)> {
    GhzSpec::new(b, total_modes)?;
    let n = (total_modes - 1) as f64;
    let b2 = b * b;
    let common = 1.0 + b2 * (n - 1.0) - n;
    let root = ((b2 - 1.0) * (b2 * (n + 1.0).powi(2) - (n - 1.0).powi(2))).sqrt();
    let denom = 2.0 * b * n;
    Ok(((common + root) / denom, (common - root) / denom))
}

pub fn build_ghz(spec: &GhzSpec) -> Result<CovarianceMatrix> {
    build_fully_symmetric(&spec.params()?)
}

/// `1 x K` negativities for `K = 1..=N`.
pub fn ghz_hierarchy(spec: &GhzSpec) -> Result<Vec<(usize, NegativityResult)>> {
    traced_hierarchy(spec, 0)
}

/// Hierarchy of the mixed state left after tracing `n_traced` modes out of
/// the GHZ-type state: `K = 1..=total_modes - n_traced - 1`.
pub fn traced_hierarchy(spec: &GhzSpec, n_traced: usize) -> Result<Vec<(usize, NegativityResult)>> {
    let remaining = spec
        .total_modes
        .checked_sub(n_traced)
        .filter(|&m| m >= 2)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "cannot trace {n_traced} of {} modes and keep a bipartition",
                spec.total_modes
            ))
        })?;
    let block = spec.params()?.block().with_modes(remaining);
    (1..remaining)
        .into_par_iter()
        .map(|k| one_by_k_negativity(&block, k).map(|r| (k, r)))
        .collect()
}

/// Infinite-squeezing limit of the `1 x K` negativity in an `(n+1)`-mode
/// GHZ-type state: `-(1/2) ln(1 - 4k / (n(k+1) - k(k-3)))`, infinite at
/// `k = n`.
pub fn ghz_limit(k: usize, n: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if k == n {
        return Ok(f64::INFINITY);
    }
    let (k, n) = (k as f64, n as f64);
    Ok(-0.5 * (1.0 - 4.0 * k / (n * (k + 1.0) - k * (k - 3.0))).ln())
}

/// `1 x 1`, `1 x (N-1)` and `1 x N` negativities of the `(N+1)`-mode state
/// for every `N` in `n_range`.
pub fn scaling_table(b: f64, n_range: RangeInclusive<usize>) -> Result<Vec<ScalingRow>> {
    if !(b > 1.0) {
        return Err(Error::InvalidParameter(format!("b = {b} must be > 1")));
    }
    check_range(&n_range)?;
    n_range
        .into_par_iter()
        .map(|n| {
            let block = GhzSpec::new(b, n + 1)?.params()?.block();
            Ok(ScalingRow {
                b,
                n,
                e_1x1: one_by_k_negativity(&block, 1)?.value,
                e_1xnm1: one_by_k_negativity(&block, n - 1)?.value,
                e_1xn: one_by_k_negativity(&block, n)?.value,
            })
        })
        .collect()
}

/// Long-format records for `K in {1, N-1, N}` over a grid of `b` and `N`,
/// ordered by `(b, N, K)`.
pub fn sweep_records(bs: &[f64], n_range: RangeInclusive<usize>) -> Result<Vec<SweepRecord>> {
    check_range(&n_range)?;
    let cells: Vec<(f64, usize)> = bs
        .iter()
        .flat_map(|&b| n_range.clone().map(move |n| (b, n)))
        .collect();
    let rows: Result<Vec<Vec<SweepRecord>>> = cells
        .into_par_iter()
        .map(|(b, n)| {
            let block = GhzSpec::new(b, n + 1)?.params()?.block();
            let mut ks = vec![1, n - 1, n];
            ks.retain(|&k| k >= 1);
            ks.dedup();
            ks.into_iter()
                .map(|k| {
                    let r = one_by_k_negativity(&block, k)?;
                    Ok(SweepRecord {
                        b,
                        n_total: n + 1,
                        k,
                        e_n: r.value,
                        n_tilde_minus: r.n_tilde_minus,
                    })
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn check_range(n_range: &RangeInclusive<usize>) -> Result<()> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo < 2 || hi > MAX_SWEEP_N || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "N range {lo}..={hi} must lie within 2..={MAX_SWEEP_N} and be nonempty"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{purity, reduce, symplectic_spectrum_numeric};
    use crate::symmetric::fs_spectrum;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn vacuum_limit() {
        assert_eq!(ghz_covariances(1.0, 5).unwrap(), (0.0, 0.0));
        assert_eq!(
            build_ghz(&GhzSpec::new(1.0, 4).unwrap()).unwrap(),
            CovarianceMatrix::identity(4)
        );
        assert!(ghz_hierarchy(&GhzSpec::new(1.0, 6).unwrap())
            .unwrap()
            .iter()
            .all(|(_, r)| r.value == 0.0));
    }

    #[test]
    fn two_modes_is_two_mode_squeezed() {
        for b in [1.2, 2.0, 7.5] {
            let (e1, e2) = ghz_covariances(b, 2).unwrap();
            let c = (b * b - 1.0).sqrt();
            assert_relative_eq!(e1, c, max_relative = 1e-14);
            assert_relative_eq!(e2, -c, max_relative = 1e-14);
        }
    }

    #[test]
    fn covariances_give_pure_spectrum() {
        for b in [1.0, 1.1, 1.5, 3.0, 10.0] {
            for total in 2..=21 {
                let p = GhzSpec::new(b, total).unwrap().params().unwrap();
                for v in fs_spectrum(&p).unwrap().values() {
                    assert!((v - 1.0).abs() < 1e-9, "b={b} total={total} nu={v}");
                }
            }
        }
    }

    #[test]
    fn ten_mode_state_is_pure_with_thermal_marginals() {
        let spec = GhzSpec::new(1.5, 10).unwrap();
        let cm = build_ghz(&spec).unwrap();
        assert!((purity(&cm).unwrap() - 1.0).abs() < 1e-9);
        for v in symplectic_spectrum_numeric(&cm).unwrap().values() {
            assert!((v - 1.0).abs() < 1e-9);
        }
        for m in 0..10 {
            let single = reduce(&cm, &[m]).unwrap();
            assert_eq!(
                single.entries(),
                &DMatrix::from_row_slice(2, 2, &[1.5, 0.0, 0.0, 1.5])
            );
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(GhzSpec::new(0.9, 3).is_err());
        assert!(GhzSpec::new(1.5, 1).is_err());
        assert!(ghz_covariances(f64::NAN, 3).is_err());
    }

    #[test]
    fn limit_examples() {
        assert_eq!(ghz_limit(9, 9).unwrap(), f64::INFINITY);
        assert_relative_eq!(
            ghz_limit(1, 9).unwrap(),
            -0.5 * 0.8f64.ln(),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            ghz_limit(1, 9).unwrap(),
            0.111_571_775_657_104_9,
            epsilon = 1e-12
        );
        let bound = 5f64.sqrt().ln();
        let mut prev = 0.0;
        for n in [2, 5, 10, 100, 10_000] {
            let v = ghz_limit(n - 1, n).unwrap();
            assert!(v < bound && v > prev);
            prev = v;
        }
        assert!(bound - prev < 1e-4);
        assert!(ghz_limit(0, 3).is_err());
        assert!(ghz_limit(4, 3).is_err());
    }

    #[test]
    fn hierarchy_length_and_order() {
        let h = ghz_hierarchy(&GhzSpec::new(1.5, 10).unwrap()).unwrap();
        assert_eq!(h.len(), 9);
        for w in h.windows(2) {
            assert!(w[1].1.value > w[0].1.value);
        }
        assert!(h.iter().all(|(_, r)| r.entangled));
    }

    #[test]
    fn traced_state_hierarchy() {
        let spec = GhzSpec::new(1.5, 10).unwrap();
        let full = ghz_hierarchy(&spec).unwrap();
        let traced = traced_hierarchy(&spec, 2).unwrap();
        assert_eq!(traced.len(), 7);
        for ((k, a), (kk, b)) in traced.iter().zip(&full) {
            assert_eq!(k, kk);
            assert!((a.value - b.value).abs() < 1e-12);
        }
        assert!(traced_hierarchy(&spec, 9).is_err());
    }

    #[test]
    fn scaling_range_errors() {
        assert!(scaling_table(1.5, 1..=4).is_err());
        assert!(scaling_table(1.5, 2..=51).is_err());
        assert!(scaling_table(1.0, 2..=4).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=3;
        assert!(scaling_table(1.5, empty).is_err());
    }

    #[test]
    fn sweep_records_ordering() {
        let recs = sweep_records(&[1.5, 2.0], 2..=4).unwrap();
        let keys: Vec<(f64, usize, usize)> = recs.iter().map(|r| (r.b, r.n_total, r.k)).collect();
        assert_eq!(
            keys,
            vec![
                (1.5, 3, 1),
                (1.5, 3, 2),
                (1.5, 4, 1),
                (1.5, 4, 2),
                (1.5, 4, 3),
                (1.5, 5, 1),
                (1.5, 5, 3),
                (1.5, 5, 4),
                (2.0, 3, 1),
                (2.0, 3, 2),
                (2.0, 4, 1),
                (2.0, 4, 2),
                (2.0, 4, 3),
                (2.0, 5, 1),
                (2.0, 5, 3),
                (2.0, 5, 4),
            ]
        );
    }
}
