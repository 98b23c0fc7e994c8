//! Instance generators and brute-force checks shared by the integration
//! tests.
#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use robproj::numerics::numerical_rank;
use robproj::{kernel_basis, DenseMatrix, ProblemSpec, ToleranceConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gaussian(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    DenseMatrix::new(m, n, normal_vec(rng, m * n)).unwrap()
}

/// Rows are scaled copies of a few random directions, mixed with some
/// generic rows, so the robust subspace has intermediate dimension.
pub fn structured(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    let k = rng.random_range(1..=n);
    let bases: Vec<Vec<f64>> = (0..k).map(|_| normal_vec(rng, n)).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            if rng.random_bool(0.2) {
                normal_vec(rng, n)
            } else {
                let b = &bases[rng.random_range(0..k)];
                let s = rng.random_range(0.5..2.0) * if rng.random() { 1.0 } else { -1.0 };
                b.iter().map(|x| s * x).collect()
            }
        })
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

/// Like [`structured`] but with small integer entries, so exact and
/// floating-point rank decisions coincide.
pub fn integer_structured(rng: &mut impl Rng, m: usize, n: usize) -> DenseMatrix {
    let int_vec = |rng: &mut dyn rand::RngCore| loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-3i32..=3) as f64).collect();
        if v.iter().any(|&x| x != 0.0) {
            break v;
        }
    };
    let k = rng.random_range(1..=n);
    let bases: Vec<Vec<f64>> = (0..k).map(|_| int_vec(rng)).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            if rng.random_bool(0.25) {
                int_vec(rng)
            } else {
                let b = &bases[rng.random_range(0..k)];
                let s = [-2.0, -1.0, 1.0, 2.0][rng.random_range(0..4)];
                b.iter().map(|x| s * x).collect()
            }
        })
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

/// Random elements of the ambiguity set: combinations of `ker(A_T)` for a
/// random `T` with `|T| = m - 2q`. `None` when that kernel is trivial.
pub fn ambiguity_sample(
    spec: &ProblemSpec,
    rng: &mut impl Rng,
    tol: &ToleranceConfig,
) -> Option<Vec<f64>> {
    let mut rows: Vec<usize> = (0..spec.m()).collect();
    for i in (1..rows.len()).rev() {
        rows.swap(i, rng.random_range(0..=i));
    }
    let mut t: Vec<usize> = rows[..spec.kept_rows()].to_vec();
    t.sort_unstable();
    let basis = kernel_basis(&spec.a().select_rows(&t), tol);
    if basis.is_empty() {
        return None;
    }
    let mut v = vec![0.0; spec.n()];
    for b in basis.vectors() {
        let c: f64 = rng.sample(StandardNormal);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += c * bi;
        }
    }
    Some(v)
}

/// `A_K x = y_K` solvable, decided by comparing ranks of `A_K` and `[A_K | y_K]`.
pub fn consistent_by_rank(a: &DenseMatrix, y: &[f64], kept: &[usize]) -> bool {
    let tol = ToleranceConfig {
        rank_rel: Some(1e-9),
        ..Default::default()
    };
    let sub = a.select_rows(kept);
    let aug_rows: Vec<Vec<f64>> = kept
        .iter()
        .map(|&i| {
            let mut r = a.row(i);
            r.push(y[i]);
            r
        })
        .collect();
    let aug = DenseMatrix::from_rows(&aug_rows).unwrap();
    numerical_rank(&sub, &tol) == numerical_rank(&aug, &tol)
}

/// Smallest number of rows whose removal leaves a consistent system,
/// by exhaustive search.
pub fn brute_force_min_drop(a: &DenseMatrix, y: &[f64], max_k: usize) -> Option<usize> {
    let m = a.rows();
    (0..=max_k).find(|&k| {
        (0..m).combinations(k).any(|d| {
            let kept: Vec<usize> = (0..m).filter(|i| !d.contains(i)).collect();
            consistent_by_rank(a, y, &kept)
        })
    })
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `y = A x⋆ + e` with `k` corrupted entries of log-uniform magnitude in
/// `[1e-2, 1e4]` and random sign.
pub fn corrupt(rng: &mut impl Rng, a: &DenseMatrix, x_star: &[f64], k: usize) -> (Vec<f64>, Vec<f64>) {
    let m = a.rows();
    let mut idx: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        idx.swap(i, rng.random_range(0..=i));
    }
    let mut e = vec![0.0; m];
    for &i in &idx[..k] {
        let mag = 10f64.powf(rng.random_range(-2.0..4.0));
        e[i] = if rng.random() { mag } else { -mag };
    }
    let y = a.mul_vec(x_star).iter().zip(&e).map(|(p, q)| p + q).collect();
    (y, e)
}
