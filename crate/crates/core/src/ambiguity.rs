//! The ambiguity set `S_q^A = {v : ||Av||_0 <= 2q}` and robustness of linear
//! maps.
//!
//! A difference `v = x1 - x2` is in `S_q^A` exactly when two signals can be
//! made to produce the same measurements with `q`-sparse corruptions each;
//! [`sparse_pair_witness`] builds those two corruptions.

use nalgebra::{DMatrix, SVD};

use crate::error::{Error, Result};
use crate::numerics::{numerical_support, split_spectrum, DenseMatrix, OrthonormalBasis, ToleranceConfig};
use crate::projector::{accumulate, ProblemSpec, ProjectorOptions, RobustProjector};

#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityCertificate {
    pub v: Vec<f64>,
    /// Numerical support of `Av`, ascending.
    pub support: Vec<usize>,
    pub support_size: usize,
    pub q: usize,
    pub is_member: bool,
}

/// Corruptions `e`, `e'` with `A(x + v) + e = Ax + e'`, both `q`-sparse.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePairWitness {
    pub e_prime: Vec<f64>,
    pub e: Vec<f64>,
    /// Support of `e'`.
    pub t1: Vec<usize>,
    /// Support of `e`.
    pub t2: Vec<usize>,
}

/// Round-off scale for entries of `Av`: `max|A_ij| * ||v||_1` bounds them.
fn product_scale(a: &DenseMatrix, v: &[f64]) -> f64 {
    a.max_abs() * v.iter().map(|x| x.abs()).sum::<f64>()
}

/// Decides `||Av||_0 <= 2q` with support threshold
/// `supp_abs * (1 + max|A| * ||v||_1)`.
pub fn ambiguity_member(
    spec: &ProblemSpec,
    v: &[f64],
    tol: &ToleranceConfig,
) -> Result<AmbiguityCertificate> {
    spec.check_len("ambiguity vector length", spec.n(), v)?;
    let av = spec.a().mul_vec(v);
    let support = numerical_support(&av, product_scale(spec.a(), v), tol);
    let support_size = support.len();
    Ok(AmbiguityCertificate {
        v: v.to_vec(),
        support,
        support_size,
        q: spec.q(),
        is_member: support_size <= 2 * spec.q(),
    })
}

/// Splits `supp(Av)` into two halves of size at most `q` (ascending indices,
/// alternating) and returns `e' = (Av)|_{T1}`, `e = -(Av)|_{T2}`.
pub fn sparse_pair_witness(
    spec: &ProblemSpec,
    v: &[f64],
    tol: &ToleranceConfig,
) -> Result<SparsePairWitness> {
    let cert = ambiguity_member(spec, v, tol)?;
    if !cert.is_member {
        return Err(Error::NotAMember {
            support_size: cert.support_size,
            q: spec.q(),
        });
    }
    let av = spec.a().mul_vec(v);
    let m = spec.m();
    let mut e_prime = vec![0.0; m];
    let mut e = vec![0.0; m];
    let (mut t1, mut t2) = (Vec::new(), Vec::new());
    for (k, &i) in cert.support.iter().enumerate() {
        if k % 2 == 0 {
            e_prime[i] = av[i];
            t1.push(i);
        } else {
            e[i] = -av[i];
            t2.push(i);
        }
    }
    debug_assert!(t1.len() <= spec.q() && t2.len() <= spec.q());
    Ok(SparsePairWitness { e_prime, e, t1, t2 })
}

/// Orthonormal basis of `Span(S_q^A) = Σ_T ker(A_T)`, read off as the image
/// of the subset accumulator. Spans the same subspace as
/// [`RobustProjector::kernel_basis`].
pub fn span_ambiguity(spec: &ProblemSpec, tol: &ToleranceConfig) -> Result<OrthonormalBasis> {
    tol.validate()?;
    let (c, _) = accumulate(spec, tol, ProjectorOptions::default());
    let (_, image) = split_spectrum(&DenseMatrix::wrap(c), tol)?;
    Ok(image)
}

fn check_map(spec: &ProblemSpec, map: &DenseMatrix, u: &RobustProjector) -> Result<()> {
    if map.cols() != spec.n() {
        return Err(Error::DimensionMismatch {
            context: "linear map columns",
            expected: spec.n(),
            found: map.cols(),
        });
    }
    if u.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            context: "projector dimension",
            expected: spec.n(),
            found: u.n(),
        });
    }
    Ok(())
}

fn robustness_bound(map: &DenseMatrix, tol: &ToleranceConfig) -> f64 {
    tol.membership_rel * (1.0 + map.max_abs())
}

/// Whether `x -> Mx` is `(A, q)`-robust, i.e. `M` annihilates `ker(U)`:
/// `||M (I - U)||_max <= membership_rel * (1 + max|M|)`.
///
/// Only linear maps are certified; for those, constancy along `S_q^A` and
/// along its span coincide.
pub fn certify_linear_robust(
    spec: &ProblemSpec,
    map: &DenseMatrix,
    u: &RobustProjector,
    tol: &ToleranceConfig,
) -> Result<bool> {
    check_map(spec, map, u)?;
    let n = spec.n();
    let residual = map.as_nalgebra() * (DMatrix::identity(n, n) - u.u().as_nalgebra());
    let worst = residual.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    Ok(worst <= robustness_bound(map, tol))
}

/// For a map that fails certification, the unit vector `v ∈ ker(U)` that
/// `M` stretches most, with `||Mv||`. `None` when `M` is robust.
pub fn robustness_violation(
    spec: &ProblemSpec,
    map: &DenseMatrix,
    u: &RobustProjector,
    tol: &ToleranceConfig,
) -> Result<Option<(Vec<f64>, f64)>> {
    if certify_linear_robust(spec, map, u, tol)? {
        return Ok(None);
    }
    let k = u.kernel_basis().as_columns();
    let mk = map.as_nalgebra() * k;
    let svd = SVD::new(mk, false, true);
    let v_t = svd.v_t.expect("V requested");
    let (top, sigma) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("a failing map has a nonempty kernel basis");
    let v: Vec<f64> = (k * v_t.row(top).transpose()).iter().copied().collect();
    Ok(Some((v, sigma)))
}
