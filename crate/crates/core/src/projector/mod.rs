//! The robust subspace `R = ∩_{|T| = m-2q} rowspan(A_T)` and its orthogonal
//! projector `U`.
//!
//! [`robust_projector`] sums the kernel projectors of every `(m-2q)`-row
//! submatrix into an accumulator `C`; the zero eigenspace of `C` is `R`, and
//! the rest of the spectrum spans `ker(U)`, which is also the span of the
//! ambiguity set. [`robust_projector_oracle`] reaches the same subspace by
//! exact rational arithmetic and is meant for cross-checking on small inputs.

mod oracle;

use itertools::Itertools;
use nalgebra::{Cholesky, DMatrix};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{
    kernel_projector, projector_onto_span, split_spectrum, DenseMatrix, OrthonormalBasis,
    ToleranceConfig,
};

pub use oracle::robust_projector_oracle;

/// Subsets summed sequentially before entering the reduction tree.
const CHUNK: usize = 64;
/// Chunks evaluated between early-exit checks.
const WAVE: usize = 16;

/// Measurement matrix `A` (`m x n`) and corruption budget `q` with `2q < m`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    a: DenseMatrix,
    q: usize,
}

impl ProblemSpec {
    pub fn new(a: DenseMatrix, q: usize) -> Result<Self> {
        let m = a.rows();
        if 2 * q >= m {
            return Err(Error::BudgetTooLarge { m, q });
        }
        Ok(ProblemSpec { a, q })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Rows kept by each submatrix in the intersection, `m - 2q`.
    pub fn kept_rows(&self) -> usize {
        self.m() - 2 * self.q
    }

    pub(crate) fn check_len(&self, context: &'static str, expected: usize, v: &[f64]) -> Result<()> {
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                context,
                expected,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// The orthogonal projector `U` onto the robust subspace, with orthonormal
/// bases for its image and kernel.
#[derive(Debug, Clone)]
pub struct RobustProjector {
    u: DenseMatrix,
    image_basis: OrthonormalBasis,
    kernel_basis: OrthonormalBasis,
    m: usize,
    q: usize,
    subsets_processed: u64,
}

impl RobustProjector {
    pub(crate) fn from_bases(
        image_basis: OrthonormalBasis,
        kernel_basis: OrthonormalBasis,
        m: usize,
        q: usize,
        subsets_processed: u64,
    ) -> Self {
        let u = projector_onto_span(&image_basis);
        RobustProjector {
            u,
            image_basis,
            kernel_basis,
            m,
            q,
            subsets_processed,
        }
    }

    pub(crate) fn with_matrix(mut self, u: DenseMatrix) -> Self {
        self.u = u;
        self
    }

    /// The `n x n` projector.
    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    /// `dim R`.
    pub fn rank(&self) -> usize {
        self.image_basis.len()
    }

    /// Orthonormal basis of the robust subspace `R = im(U)`.
    pub fn image_basis(&self) -> &OrthonormalBasis {
        &self.image_basis
    }

    /// Orthonormal basis of `ker(U) = R^⊥ = Span(S_q^A)`.
    pub fn kernel_basis(&self) -> &OrthonormalBasis {
        &self.kernel_basis
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.u.cols()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn subsets_processed(&self) -> u64 {
        self.subsets_processed
    }

    /// `U x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.u.mul_vec(x)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProjectorOptions {
    /// Evaluate subset chunks on the rayon pool. The reduction tree is the
    /// same as in the sequential path, so results are bit-identical.
    pub parallel: bool,
    /// Stop enumerating once the accumulator is numerically positive
    /// definite (then `R = {0}`). `subsets_processed` may be smaller than
    /// `C(m, 2q)` when this fires.
    pub early_exit: bool,
}

/// `C(m, 2q)`, the number of `(m-2q)`-row submatrices.
pub fn subset_count(m: usize, q: usize) -> Result<u64> {
    if 2 * q >= m {
        return Err(Error::BudgetTooLarge { m, q });
    }
    binomial(m, 2 * q)
}

pub(crate) fn binomial(m: usize, k: usize) -> Result<u64> {
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (m - i) / (i + 1) is always an integer at this point
        acc = acc
            .checked_mul((m - i) as u128)
            .ok_or(Error::CountOverflow { m, k })?
            / (i as u128 + 1);
    }
    u64::try_from(acc).map_err(|_| Error::CountOverflow { m, k })
}

/// Robust projector with default options (sequential, no early exit).
pub fn robust_projector(spec: &ProblemSpec, tol: &ToleranceConfig) -> Result<RobustProjector> {
    robust_projector_with(spec, tol, ProjectorOptions::default())
}

pub fn robust_projector_with(
    spec: &ProblemSpec,
    tol: &ToleranceConfig,
    opts: ProjectorOptions,
) -> Result<RobustProjector> {
    tol.validate()?;
    let (c, processed) = accumulate(spec, tol, opts);
    let (zero, nonzero) = split_spectrum(&DenseMatrix::wrap(c), tol)?;
    Ok(RobustProjector::from_bases(
        zero,
        nonzero,
        spec.m(),
        spec.q(),
        processed,
    ))
}

/// Sum of `ker(A_T)` projectors over all `T` of size `m - 2q`, visited in
/// lexicographic order, together with the number of subsets visited.
///
/// Subsets are summed in fixed-size chunks; chunk sums are then combined by a
/// balanced pairwise tree, so the floating-point result does not depend on
/// thread count or scheduling.
pub(crate) fn accumulate(
    spec: &ProblemSpec,
    tol: &ToleranceConfig,
    opts: ProjectorOptions,
) -> (DMatrix<f64>, u64) {
    let n = spec.n();
    let a = spec.a();
    let chunk_sum = |chunk: &[Vec<usize>]| {
        let mut c = DMatrix::zeros(n, n);
        for t in chunk {
            c += kernel_projector(&a.select_rows(t), tol);
        }
        c
    };

    let mut subsets = (0..spec.m()).combinations(spec.kept_rows());
    let mut partials: Vec<DMatrix<f64>> = Vec::new();
    let mut processed = 0u64;
    let wave_len = match (opts.early_exit, opts.parallel) {
        (true, false) => CHUNK,
        _ => CHUNK * WAVE,
    };
    loop {
        let wave: Vec<Vec<usize>> = subsets.by_ref().take(wave_len).collect();
        if wave.is_empty() {
            break;
        }
        processed += wave.len() as u64;
        if opts.parallel {
            partials.par_extend(wave.par_chunks(CHUNK).map(chunk_sum));
        } else {
            partials.extend(wave.chunks(CHUNK).map(chunk_sum));
        }
        if opts.early_exit && is_positive_definite(&tree_sum(partials.clone(), n), tol) {
            break;
        }
    }
    (tree_sum(partials, n), processed)
}

fn tree_sum(mut parts: Vec<DMatrix<f64>>, n: usize) -> DMatrix<f64> {
    if parts.is_empty() {
        return DMatrix::zeros(n, n);
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(left) = it.next() {
            match it.next() {
                Some(right) => next.push(left + right),
                None => next.push(left),
            }
        }
        parts = next;
    }
    parts.pop().expect("non-empty")
}

/// `C - eig_zero * I` admits a Cholesky factorization, i.e. no eigenvalue of
/// `C` sits below the zero cutoff.
fn is_positive_definite(c: &DMatrix<f64>, tol: &ToleranceConfig) -> bool {
    let n = c.nrows();
    let shifted = c - DMatrix::identity(n, n) * tol.eig_zero;
    Cholesky::new(shifted).is_some()
}
