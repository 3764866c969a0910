//! Generic covariance-matrix algebra.
//!
//! Everything here works on an arbitrary `2N x 2N` covariance matrix: the
//! symplectic form, physicality checks, the numeric symplectic spectrum used
//! as the reference oracle for every closed-form result, purity, the
//! seralian, partial transposition, reductions and the numeric logarithmic
//! negativity.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen, SVD};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, PHYSICAL_TOL, SYMMETRY_TOL};

/// A `2N x 2N` real symmetric covariance matrix in `(x_1, p_1, ..., x_N, p_N)`
/// ordering.
///
/// Symmetry is exact: the constructor rejects inputs whose asymmetry exceeds
/// [`SYMMETRY_TOL`] and then averages the two triangles.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCovariance", into = "RawCovariance")]
pub struct CovarianceMatrix {
    n_modes: usize,
    entries: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawCovariance {
    n_modes: usize,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<RawCovariance> for CovarianceMatrix {
    type Error = Error;

    fn try_from(raw: RawCovariance) -> Result<Self> {
        let cm = Self::from_rows(&raw.entries)?;
        if cm.n_modes != raw.n_modes {
            return Err(Error::ModeCount {
                declared: raw.n_modes,
                dim: cm.dim(),
            });
        }
        Ok(cm)
    }
}

impl From<CovarianceMatrix> for RawCovariance {
    fn from(cm: CovarianceMatrix) -> Self {
        RawCovariance {
            n_modes: cm.n_modes,
            entries: cm
                .entries
                .row_iter()
                .map(|row| row.iter().copied().collect())
                .collect(),
        }
    }
}

impl fmt::Debug for CovarianceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CovarianceMatrix")
            .field("n_modes", &self.n_modes)
            .field("entries", &format_args!("{}", self.entries))
            .finish()
    }
}

impl CovarianceMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::Shape { rows, cols });
        }
        for row in 0..rows {
            for col in row + 1..cols {
                let diff = (entries[(row, col)] - entries[(col, row)]).abs();
                // NaN fails this comparison as well.
                if !(diff <= SYMMETRY_TOL) {
                    return Err(Error::Asymmetric { row, col, diff });
                }
            }
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self {
            n_modes: rows / 2,
            entries,
        })
    }

    /// Builds from row-major nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Vacuum state on `n_modes` modes.
    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Assembles a covariance matrix from its per-mode `2x2` blocks.
    ///
    /// `block(i, j)` is queried for `i <= j` only; the lower triangle is
    /// filled with transposes, so the result is symmetric by construction
    /// provided the diagonal blocks are.
    pub fn from_blocks(
        n_modes: usize,
        block: impl Fn(usize, usize) -> Matrix2<f64>,
    ) -> Result<Self> {
        let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for i in 0..n_modes {
            for j in i..n_modes {
                let b = block(i, j);
                m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(&b);
                if i != j {
                    m.fixed_view_mut::<2, 2>(2 * j, 2 * i)
                        .copy_from(&b.transpose());
                }
            }
        }
        Self::new(m)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// The `2x2` block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    /// Natural log of the determinant, via Cholesky.
    pub fn ln_det(&self) -> Result<f64> {
        let chol = self
            .entries
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?;
        Ok(2.0
            * chol
                .l_dirty()
                .diagonal()
                .iter()
                .map(|d| d.ln())
                .sum::<f64>())
    }

    /// Applies the local symplectic congruence `S sigma S^T` with
    /// `S = S_1 (+) ... (+) S_N`.
    ///
    /// # Panics
    ///
    /// Panics if `locals.len() != n_modes`.
    pub fn local_congruence(&self, locals: &[Matrix2<f64>]) -> Self {
        assert_eq!(locals.len(), self.n_modes, "one local map per mode");
        let entries = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            let (i, a) = (r / 2, r % 2);
            let (j, b) = (c / 2, c % 2);
            let blk = self.block(i, j);
            let out = locals[i] * blk * locals[j].transpose();
            out[(a, b)]
        });
        Self {
            n_modes: self.n_modes,
            entries: (&entries + entries.transpose()) * 0.5,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("covariance matrices always serialize")
    }
}

/// Ordered symplectic eigenvalues (ascending).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    /// `prod nu_i^2`, equal to the determinant of the matrix.
    pub fn product_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).product()
    }

    /// `sum nu_i^2`, equal to the seralian.
    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `-sum_{nu_i < 1} ln nu_i`, clamped at zero.
    pub fn log_negativity(&self) -> f64 {
        let e: f64 = self
            .values
            .iter()
            .filter(|&&v| v < 1.0)
            .map(|v| -v.ln())
            .sum();
        e.max(0.0)
    }

    /// Largest relative deviation between two spectra of equal length.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| rel_diff(*a, *b))
            .fold(0.0, f64::max)
    }
}

/// `|a - b| / max(|a|, |b|, 1)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Set of modes whose momentum quadrature is mirrored by partial transposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModePartition {
    transposed: BTreeSet<usize>,
}

impl ModePartition {
    pub fn new(modes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let transposed: BTreeSet<usize> = modes.into_iter().collect();
        if transposed.is_empty() {
            return Err(Error::EmptyModeSet);
        }
        Ok(Self { transposed })
    }

    pub fn single(mode: usize) -> Self {
        Self {
            transposed: BTreeSet::from([mode]),
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.transposed.iter().copied()
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.transposed.contains(&mode)
    }

    fn check(&self, n_modes: usize) -> Result<()> {
        match self.transposed.iter().next_back() {
            Some(&index) if index >= n_modes => Err(Error::ModeOutOfRange { index, n_modes }),
            _ => Ok(()),
        }
    }
}

/// Physicality verdict for a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub is_physical: bool,
    /// Smallest symplectic eigenvalue; `None` when the matrix is not
    /// positive definite and has no symplectic spectrum.
    pub min_nu: Option<f64>,
}

/// `Omega = omega (+) ... (+) omega` with `omega = [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn validate(cm: &CovarianceMatrix) -> PhysicalityReport {
    match symplectic_spectrum_numeric(cm) {
        Ok(spectrum) => PhysicalityReport {
            is_physical: spectrum.min() >= 1.0 - PHYSICAL_TOL,
            min_nu: Some(spectrum.min()),
        },
        Err(_) => PhysicalityReport {
            is_physical: false,
            min_nu: None,
        },
    }
}

/// Numeric symplectic spectrum, the reference every closed form is checked
/// against.
///
/// With `S = sigma^{1/2}` from a symmetric eigendecomposition, the real
/// antisymmetric matrix `S Omega S` is similar to `Omega sigma`, so its
/// singular values are the symplectic eigenvalues, each appearing twice.
pub fn symplectic_spectrum_numeric(cm: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let eig = SymmetricEigen::new(cm.entries.clone());
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    let roots = eig.eigenvalues.map(f64::sqrt);
    let v = &eig.eigenvectors;
    let sqrt_cm = v * DMatrix::from_diagonal(&roots) * v.transpose();
    let antisym = &sqrt_cm * symplectic_form(cm.n_modes) * &sqrt_cm;

    let mut sv: Vec<f64> = SVD::new(antisym, false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(f64::total_cmp);
    let values = sv.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    Ok(SymplecticSpectrum::new(values))
}

/// `(Det sigma)^{-1/2}`.
pub fn purity(cm: &CovarianceMatrix) -> Result<f64> {
    let ln_det = cm.ln_det()?;
    let det = ln_det.exp();
    if det < 1.0 - PHYSICAL_TOL {
        return Err(Error::DeterminantBelowOne { det });
    }
    Ok((-0.5 * ln_det).exp())
}

/// Sum of the determinants of the per-mode blocks, off-diagonal ones counted
/// twice.
pub fn seralian(cm: &CovarianceMatrix) -> f64 {
    let n = cm.n_modes;
    let mut delta = 0.0;
    for i in 0..n {
        delta += cm.block(i, i).determinant();
        for j in i + 1..n {
            delta += 2.0 * cm.block(i, j).determinant();
        }
    }
    delta
}

/// `P sigma P`, with `P` flipping the momentum of every transposed mode.
pub fn partial_transpose(
    cm: &CovarianceMatrix,
    partition: &ModePartition,
) -> Result<CovarianceMatrix> {
    partition.check(cm.n_modes)?;
    let sign = |k: usize| {
        if k % 2 == 1 && partition.contains(k / 2) {
            -1.0
        } else {
            1.0
        }
    };
    let dim = cm.dim();
    let entries = DMatrix::from_fn(dim, dim, |r, c| sign(r) * sign(c) * cm.entries[(r, c)]);
    Ok(CovarianceMatrix {
        n_modes: cm.n_modes,
        entries,
    })
}

/// Numeric logarithmic negativity of the bipartition `partition | rest`.
///
/// PPT certifies separability only for `1 x N` splits; for larger
/// transposed sets the value is still the negativity but a zero does not
/// prove separability.
pub fn log_negativity_numeric(cm: &CovarianceMatrix, partition: &ModePartition) -> Result<f64> {
    let transposed = partial_transpose(cm, partition)?;
    Ok(symplectic_spectrum_numeric(&transposed)?.log_negativity())
}

/// Marginal covariance matrix on `kept_modes`, in the listed order.
pub fn reduce(cm: &CovarianceMatrix, kept_modes: &[usize]) -> Result<CovarianceMatrix> {
    if kept_modes.is_empty() {
        return Err(Error::EmptyModeSet);
    }
    let mut seen = BTreeSet::new();
    for &index in kept_modes {
        if index >= cm.n_modes {
            return Err(Error::ModeOutOfRange {
                index,
                n_modes: cm.n_modes,
            });
        }
        if !seen.insert(index) {
            return Err(Error::DuplicateMode(index));
        }
    }
    let dim = 2 * kept_modes.len();
    let src = |k: usize| 2 * kept_modes[k / 2] + k % 2;
    let entries = DMatrix::from_fn(dim, dim, |r, c| cm.entries[(src(r), src(c))]);
    Ok(CovarianceMatrix {
        n_modes: kept_modes.len(),
        entries,
    })
}
