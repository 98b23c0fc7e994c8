//! End-to-end recovery of the affine set `x̂ + ker(U)` from `(A, q, y)`.

use crate::decoder::{l0_decode_with, DecodeOptions};
use crate::error::{Error, Result};
use crate::numerics::{norm2, projector_onto_span, sub, OrthonormalBasis, ToleranceConfig};
use crate::projector::{robust_projector, ProblemSpec, RobustProjector};

/// The set of signals consistent with the measurements under the adversary
/// model: `anchor + span(kernel_basis)`.
#[derive(Debug, Clone)]
pub struct RecoverySet {
    pub anchor: Vec<f64>,
    pub kernel_basis: OrthonormalBasis,
    /// `U · anchor`; does not depend on which minimizer was picked.
    pub projected_anchor: Vec<f64>,
    /// `dim im(U)`.
    pub rank: usize,
}

impl RecoverySet {
    pub fn from_parts(anchor: Vec<f64>, projector: &RobustProjector) -> RecoverySet {
        RecoverySet {
            projected_anchor: projector.apply(&anchor),
            anchor,
            kernel_basis: projector.kernel_basis().clone(),
            rank: projector.rank(),
        }
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }
}

pub fn recover(spec: &ProblemSpec, y: &[f64], tol: &ToleranceConfig) -> Result<RecoverySet> {
    recover_with(spec, y, tol, DecodeOptions::default())
}

pub fn recover_with(
    spec: &ProblemSpec,
    y: &[f64],
    tol: &ToleranceConfig,
    opts: DecodeOptions,
) -> Result<RecoverySet> {
    let decoded = l0_decode_with(spec, y, tol, opts)?;
    let projector = robust_projector(spec, tol)?;
    Ok(RecoverySet::from_parts(decoded.x_hat, &projector))
}

/// `x - anchor ∈ span(kernel_basis)`, up to
/// `membership_rel * (1 + ||x||)` in the residual.
pub fn set_member(set: &RecoverySet, x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
    if x.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            context: "signal length",
            expected: set.dim(),
            found: x.len(),
        });
    }
    let d = sub(x, &set.anchor);
    let off = sub(&d, &set.kernel_basis.project(&d));
    Ok(norm2(&off) <= tol.membership_rel * (1.0 + norm2(x)))
}

/// Same kernel span and same `U`-projection of the anchors.
pub fn sets_equal(s1: &RecoverySet, s2: &RecoverySet, tol: &ToleranceConfig) -> Result<bool> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            context: "ambient dimension",
            expected: s1.dim(),
            found: s2.dim(),
        });
    }
    let p1 = projector_onto_span(&s1.kernel_basis);
    let p2 = projector_onto_span(&s2.kernel_basis);
    if p1.max_abs_diff(&p2) > tol.membership_rel {
        return Ok(false);
    }
    let gap = norm2(&sub(&s1.projected_anchor, &s2.projected_anchor));
    let scale = 1.0 + norm2(&s1.projected_anchor).max(norm2(&s2.projected_anchor));
    Ok(gap <= tol.membership_rel * scale)
}
