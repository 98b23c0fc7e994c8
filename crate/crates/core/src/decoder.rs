//! Exact ℓ0-decoding: `x̂ ∈ argmin_x ||y - Ax||_0`.
//!
//! The search drops `k = 0, 1, ..., q` rows and stops at the first consistent
//! subsystem. Any `x` that fits the kept rows exactly has residual support
//! inside the dropped set, so the first hit in increasing `k` is a minimizer.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{min_norm_solve, norm2, numerical_support, sub, ToleranceConfig};
use crate::projector::ProblemSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub x_hat: Vec<f64>,
    /// `y - A x̂`.
    pub e_hat: Vec<f64>,
    /// Numerical support of `e_hat`.
    pub support: Vec<usize>,
    pub support_size: usize,
    /// Rows excluded from the winning consistent subsystem.
    pub dropped_rows: Vec<usize>,
}

/// Order in which dropped-row sets of equal size are tried.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SearchOrder {
    #[default]
    Lexicographic,
    ReverseLexicographic,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    pub order: SearchOrder,
    /// Test candidate sets of one size on the rayon pool. The winner is still
    /// the first candidate in search order.
    pub parallel: bool,
}

pub fn l0_decode(spec: &ProblemSpec, y: &[f64], tol: &ToleranceConfig) -> Result<DecodeResult> {
    l0_decode_with(spec, y, tol, DecodeOptions::default())
}

pub fn l0_decode_with(
    spec: &ProblemSpec,
    y: &[f64],
    tol: &ToleranceConfig,
    opts: DecodeOptions,
) -> Result<DecodeResult> {
    tol.validate()?;
    spec.check_len("measurement vector length", spec.m(), y)?;
    let m = spec.m();
    let threshold = tol.consist_rel * (1.0 + norm2(y));

    let try_drop = |dropped: &Vec<usize>| -> Option<Vec<f64>> {
        let kept: Vec<usize> = (0..m).filter(|i| !dropped.contains(i)).collect();
        let y_kept: Vec<f64> = kept.iter().map(|&i| y[i]).collect();
        let (x, residual) = min_norm_solve(&spec.a().select_rows(&kept), &y_kept, tol).ok()?;
        (residual <= threshold).then_some(x)
    };

    for k in 0..=spec.q() {
        let mut candidates: Vec<Vec<usize>> = (0..m).combinations(k).collect();
        if opts.order == SearchOrder::ReverseLexicographic {
            candidates.reverse();
        }
        let hit = if opts.parallel {
            candidates
                .par_iter()
                .find_map_first(|d| try_drop(d).map(|x| (d.clone(), x)))
        } else {
            candidates
                .iter()
                .find_map(|d| try_drop(d).map(|x| (d.clone(), x)))
        };
        if let Some((dropped_rows, x_hat)) = hit {
            let e_hat = sub(y, &spec.a().mul_vec(&x_hat));
            let support = numerical_support(&e_hat, norm2(y), tol);
            return Ok(DecodeResult {
                support_size: support.len(),
                x_hat,
                e_hat,
                support,
                dropped_rows,
            });
        }
    }
    Err(Error::BudgetExceeded { q: spec.q() })
}

/// Numerical `||y - Ax||_0`, with support threshold `supp_abs * (1 + ||y||)`.
pub fn l0_residual_norm(
    spec: &ProblemSpec,
    y: &[f64],
    x: &[f64],
    tol: &ToleranceConfig,
) -> Result<usize> {
    spec.check_len("measurement vector length", spec.m(), y)?;
    spec.check_len("signal length", spec.n(), x)?;
    let r = sub(y, &spec.a().mul_vec(x));
    Ok(numerical_support(&r, norm2(y), tol).len())
}
