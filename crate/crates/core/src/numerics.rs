//! Dense linear-algebra primitives shared by every other module.
//!
//! Every numerical "is this zero?" decision in the crate goes through a
//! [`ToleranceConfig`]. Matrices are wrapped in [`DenseMatrix`], which
//! guarantees a non-empty shape and finite entries; subspaces are carried as
//! [`OrthonormalBasis`] values.

use std::fmt;
use std::ops::Index;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orthonormality tolerance enforced by [`OrthonormalBasis::new`].
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Absolute tolerance for the symmetry check in [`zero_eigenspace`], scaled by
/// `max(1, max|C|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A real, finite, non-empty `rows x cols` matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<f64>);

impl DenseMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, row_major: Vec<f64>) -> Result<Self> {
        if row_major.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "row-major entries",
                expected: rows * cols,
                found: row_major.len(),
            });
        }
        Self::from_nalgebra(DMatrix::from_row_slice(rows, cols, &row_major))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "row length",
                    expected: cols,
                    found: row.len(),
                });
            }
        }
        let flat = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, flat)
    }

    pub fn from_nalgebra(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::EmptyMatrix {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(DenseMatrix(m))
    }

    /// Wraps a matrix the caller has built from finite data.
    pub(crate) fn wrap(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() > 0 && m.ncols() > 0);
        debug_assert!(m.iter().all(|x| x.is_finite()));
        DenseMatrix(m)
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix::wrap(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_nalgebra(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<f64> {
        self.0
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.0.row(i).iter().copied().collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows()).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::wrap(self.0.transpose())
    }

    /// Submatrix keeping the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> DenseMatrix {
        DenseMatrix::wrap(self.0.select_rows(rows))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols(), "vector length must equal column count");
        (self.as_nalgebra() * DVector::from_column_slice(x))
            .iter()
            .copied()
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols(), other.rows(), "inner dimensions must agree");
        DenseMatrix::wrap(&self.0 * &other.0)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// `max |self - other|` over all entries. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shapes must agree");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn asymmetry(&self) -> f64 {
        if self.rows() != self.cols() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.transpose())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix{:?}", self.to_rows())
    }
}

/// Thresholds for every numerical-zero decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff: `sigma_i <= rank_rel * sigma_max` is
    /// treated as zero. `None` means `max(rows, cols) * f64::EPSILON` for the
    /// matrix being decomposed.
    pub rank_rel: Option<f64>,
    /// Absolute cutoff below which an eigenvalue of the subset accumulator
    /// counts as zero.
    pub eig_zero: f64,
    /// Entry-magnitude cutoff defining the numerical support of a vector,
    /// scaled by `1 + scale` where `scale` is the natural magnitude of the
    /// quantity (see [`numerical_support`]).
    pub supp_abs: f64,
    /// Relative residual cutoff for declaring `Mx = b` consistent:
    /// `||Mx - b|| <= consist_rel * (1 + ||b||)`.
    pub consist_rel: f64,
    /// Relative cutoff for subspace/affine-set membership and projector
    /// comparisons.
    pub membership_rel: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel: None,
            eig_zero: 1e-10,
            supp_abs: 1e-9,
            consist_rel: 1e-9,
            membership_rel: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidTolerance { name, value })
            }
        };
        if let Some(r) = self.rank_rel {
            check("rank_rel", r)?;
        }
        check("eig_zero", self.eig_zero)?;
        check("supp_abs", self.supp_abs)?;
        check("consist_rel", self.consist_rel)?;
        check("membership_rel", self.membership_rel)
    }

    /// Relative singular-value cutoff for a `rows x cols` matrix.
    pub fn rank_cutoff(&self, rows: usize, cols: usize) -> f64 {
        self.rank_rel
            .unwrap_or_else(|| rows.max(cols) as f64 * f64::EPSILON)
    }
}

/// A list of orthonormal vectors in `R^ambient_dim`, stored as the columns of
/// an `ambient_dim x k` matrix (`k` may be zero).
#[derive(Clone, PartialEq)]
pub struct OrthonormalBasis {
    columns: DMatrix<f64>,
}

impl OrthonormalBasis {
    /// Validates orthonormality to [`ORTHONORMAL_TOL`].
    pub fn new(ambient_dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "basis vector length",
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        if vectors.len() > ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "basis size",
                expected: ambient_dim,
                found: vectors.len(),
            });
        }
        let columns = DMatrix::from_fn(ambient_dim, vectors.len(), |i, j| vectors[j][i]);
        let basis = OrthonormalBasis { columns };
        let deviation = basis.orthonormality_error();
        if deviation > ORTHONORMAL_TOL || !deviation.is_finite() {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(basis)
    }

    pub fn empty(ambient_dim: usize) -> Self {
        OrthonormalBasis {
            columns: DMatrix::zeros(ambient_dim, 0),
        }
    }

    /// Columns are trusted to be orthonormal; signs are canonicalized.
    pub(crate) fn from_columns(mut columns: DMatrix<f64>) -> Self {
        for mut col in columns.column_iter_mut() {
            if let Some(first) = col.iter().copied().find(|x| x.abs() > ORTHONORMAL_TOL) {
                if first < 0.0 {
                    col.neg_mut();
                }
            }
        }
        OrthonormalBasis { columns }
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn len(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.columns.column(i).iter().copied().collect()
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.vector(i)).collect()
    }

    /// The `ambient_dim x len` matrix with the basis vectors as columns.
    pub fn as_columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    /// `max |B^T B - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.columns.transpose() * &self.columns;
        let k = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Coordinates of the orthogonal projection of `x` onto the span,
    /// expressed back in the ambient space.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(x);
        let coeffs = self.columns.transpose() * &x;
        (&self.columns * coeffs).iter().copied().collect()
    }
}

impl fmt::Debug for OrthonormalBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrthonormalBasis")
            .field("ambient_dim", &self.ambient_dim())
            .field("vectors", &self.vectors())
            .finish()
    }
}

/// Orthonormal basis of `{v : Mv = 0}`, deciding rank by the relative
/// singular-value cutoff.
pub fn kernel_basis(m: &DenseMatrix, tol: &ToleranceConfig) -> OrthonormalBasis {
    let (rows, cols) = (m.rows(), m.cols());
    // Wide matrices are padded with zero rows so the SVD yields a full V.
    let work = if rows < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.rows_mut(0, rows).copy_from(m.as_nalgebra());
        padded
    } else {
        m.as_nalgebra().clone()
    };
    let svd = SVD::new(work, false, true);
    let v_t = svd.v_t.expect("V requested");
    let cutoff = tol.rank_cutoff(rows, cols) * svd.singular_values.max();
    let null_rows: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s <= cutoff)
        .map(|(i, _)| i)
        .collect();
    OrthonormalBasis::from_columns(v_t.select_rows(&null_rows).transpose())
}

/// Number of singular values above `rank_rel * sigma_max`.
pub fn numerical_rank(m: &DenseMatrix, tol: &ToleranceConfig) -> usize {
    let sv = m.as_nalgebra().singular_values();
    let cutoff = tol.rank_cutoff(m.rows(), m.cols()) * sv.max();
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthogonal projector onto `ker(M)`, formed as `I - V_r V_r^T` from the
/// right singular vectors of the numerically nonzero singular values.
///
/// Equal to `B B^T` for `B = kernel_basis(M)` but avoids the padded SVD for
/// wide matrices. The result is exactly symmetric.
pub fn kernel_projector(m: &DenseMatrix, tol: &ToleranceConfig) -> DMatrix<f64> {
    let n = m.cols();
    let svd = SVD::new(m.as_nalgebra().clone(), false, true);
    let v_t = svd.v_t.expect("V requested");
    let cutoff = tol.rank_cutoff(m.rows(), n) * svd.singular_values.max();
    let mut p = DMatrix::identity(n, n);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        let v = v_t.row(k);
        for j in 0..n {
            for i in j..n {
                let d = v[i] * v[j];
                p[(i, j)] -= d;
            }
        }
    }
    mirror_lower(&mut p);
    p
}

/// Copies the lower triangle onto the upper one.
fn mirror_lower(p: &mut DMatrix<f64>) {
    let n = p.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            p[(j, i)] = p[(i, j)];
        }
    }
}

/// `P = sum_i b_i b_i^T`, the orthogonal projector onto the span of `basis`.
pub fn projector_onto_span(basis: &OrthonormalBasis) -> DenseMatrix {
    let b = basis.as_columns();
    let mut p = b * b.transpose();
    mirror_lower(&mut p);
    DenseMatrix::wrap(p)
}

/// Splits the spectrum of a symmetric PSD matrix into the zero eigenspace
/// (eigenvalues `< eig_zero`) and its orthogonal complement.
pub(crate) fn split_spectrum(
    c: &DenseMatrix,
    tol: &ToleranceConfig,
) -> Result<(OrthonormalBasis, OrthonormalBasis)> {
    if c.rows() != c.cols() {
        return Err(Error::DimensionMismatch {
            context: "square matrix",
            expected: c.rows(),
            found: c.cols(),
        });
    }
    let asymmetry = c.asymmetry();
    if asymmetry > SYMMETRY_TOL * c.max_abs().max(1.0) {
        return Err(Error::NonSymmetricInput { asymmetry });
    }
    let eig = SymmetricEigen::new(c.as_nalgebra().clone());
    let mut order: Vec<usize> = (0..c.rows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (zero, nonzero): (Vec<usize>, Vec<usize>) = order
        .into_iter()
        .partition(|&i| eig.eigenvalues[i] < tol.eig_zero);
    let pick = |idx: &[usize]| {
        OrthonormalBasis::from_columns(eig.eigenvectors.select_columns(idx))
    };
    Ok((pick(&zero), pick(&nonzero)))
}

/// Orthonormal basis of the eigenvectors of `C` whose eigenvalue is below
/// `tol.eig_zero`.
pub fn zero_eigenspace(c: &DenseMatrix, tol: &ToleranceConfig) -> Result<OrthonormalBasis> {
    split_spectrum(c, tol).map(|(zero, _)| zero)
}

/// Minimum-norm least-squares solution of `Mx = b` via the pseudoinverse,
/// together with `||Mx - b||_2`.
pub fn min_norm_solve(
    m: &DenseMatrix,
    b: &[f64],
    tol: &ToleranceConfig,
) -> Result<(Vec<f64>, f64)> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: "right-hand side length",
            expected: m.rows(),
            found: b.len(),
        });
    }
    let svd = SVD::new(m.as_nalgebra().clone(), true, true);
    let u = svd.u.as_ref().expect("U requested");
    let v_t = svd.v_t.as_ref().expect("V requested");
    let cutoff = tol.rank_cutoff(m.rows(), m.cols()) * svd.singular_values.max();
    let rhs = DVector::from_column_slice(b);
    let mut x = DVector::zeros(m.cols());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        let coeff = u.column(k).dot(&rhs) / s;
        x.axpy(coeff, &v_t.row(k).transpose(), 1.0);
    }
    let residual = (m.as_nalgebra() * &x - &rhs).norm();
    Ok((x.iter().copied().collect(), residual))
}

/// Indices `i` with `|w_i| > supp_abs * (1 + scale)`.
///
/// `scale` is the magnitude against which round-off in `w` should be judged;
/// pass `0.0` for a purely absolute cutoff.
pub fn numerical_support(w: &[f64], scale: f64, tol: &ToleranceConfig) -> Vec<usize> {
    let cutoff = tol.supp_abs * (1.0 + scale);
    w.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > cutoff)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
