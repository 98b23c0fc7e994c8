//! Exact-arithmetic reference for the robust subspace.
//!
//! Every `f64` entry of `A` is a dyadic rational, so the rowspace
//! intersection can be carried out without rounding. The complement
//! `R^⊥ = Σ_T ker(A_T)` is grown one subset at a time: after each step the
//! running basis is reduced to echelon form, which is the same as
//! intersecting `R` with the next `rowspan(A_T)` through the kernel of the
//! stacked complement bases. Rank decisions are exact, so the result agrees
//! with the floating-point path only on inputs whose rank is not ambiguous at
//! working precision. Intended for `m <= 12`, `n <= 8`.

use itertools::Itertools;
use nalgebra::DMatrix;
use num::{BigRational, ToPrimitive, Zero};

use super::{binomial, ProblemSpec, RobustProjector};
use crate::error::Result;
use crate::numerics::{DenseMatrix, OrthonormalBasis, ToleranceConfig};

type Row = Vec<BigRational>;

/// Robust projector computed in exact rational arithmetic.
///
/// The tolerance only governs validation; no rank decision here is
/// approximate.
pub fn robust_projector_oracle(
    spec: &ProblemSpec,
    tol: &ToleranceConfig,
) -> Result<RobustProjector> {
    tol.validate()?;
    let n = spec.n();
    let a: Vec<Row> = spec
        .a()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&x| rational(x)).collect())
        .collect();

    let mut complement: Vec<Row> = Vec::new();
    for t in (0..spec.m()).combinations(spec.kept_rows()) {
        let sub: Vec<Row> = t.iter().map(|&i| a[i].clone()).collect();
        complement.extend(nullspace(sub, n));
        complement = echelon_basis(complement, n);
    }
    let image = nullspace(complement.clone(), n);

    let u = exact_projector(&image, n);
    let image_basis = orthonormalize(&image, n);
    let kernel_basis = orthonormalize(&complement, n);
    let processed = binomial(spec.m(), 2 * spec.q())?;
    Ok(
        RobustProjector::from_bases(image_basis, kernel_basis, spec.m(), spec.q(), processed)
            .with_matrix(u),
    )
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("DenseMatrix entries are finite")
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Row>, n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A basis (as rows) of the row space.
fn echelon_basis(mut rows: Vec<Row>, n: usize) -> Vec<Row> {
    rref(&mut rows, n);
    rows
}

/// A basis of `{v : rows · v = 0}` in `Q^n`.
fn nullspace(mut rows: Vec<Row>, n: usize) -> Vec<Row> {
    let pivots = rref(&mut rows, n);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::from_integer(1.into());
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// `B (B^T B)^{-1} B^T` for the columns `B` given as rows, rounded once at
/// the end.
fn exact_projector(basis: &[Row], n: usize) -> DenseMatrix {
    let k = basis.len();
    if k == 0 {
        return DenseMatrix::zeros(n, n);
    }
    let dot = |x: &Row, y: &Row| {
        x.iter()
            .zip(y)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    };
    // Augmented [G | I] -> [I | G^{-1}].
    let mut aug: Vec<Row> = (0..k)
        .map(|i| {
            let mut row: Row = (0..k).map(|j| dot(&basis[i], &basis[j])).collect();
            row.extend((0..k).map(|j| {
                if i == j {
                    BigRational::from_integer(1.into())
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = rref(&mut aug, k);
    debug_assert_eq!(pivots.len(), k, "Gram matrix of a basis is invertible");
    let gram_inv: Vec<Row> = aug.into_iter().map(|row| row[k..].to_vec()).collect();

    let mut u = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = BigRational::zero();
            for (p, gp) in gram_inv.iter().enumerate() {
                for (q, g) in gp.iter().enumerate() {
                    if !g.is_zero() {
                        acc += &basis[p][i] * g * &basis[q][j];
                    }
                }
            }
            let v = acc.to_f64().expect("finite");
            u[(i, j)] = v;
            u[(j, i)] = v;
        }
    }
    DenseMatrix::wrap(u)
}

/// Modified Gram-Schmidt, applied twice, on the rounded basis vectors.
fn orthonormalize(basis: &[Row], n: usize) -> OrthonormalBasis {
    let mut cols = DMatrix::from_fn(n, basis.len(), |i, j| {
        basis[j][i].to_f64().expect("finite")
    });
    for j in 0..cols.ncols() {
        for _ in 0..2 {
            for p in 0..j {
                let proj = cols.column(p).dot(&cols.column(j));
                let prev = cols.column(p).clone_owned();
                cols.column_mut(j).axpy(-proj, &prev, 1.0);
            }
        }
        let norm = cols.column(j).norm();
        cols.column_mut(j).unscale_mut(norm);
    }
    OrthonormalBasis::from_columns(cols)
}
