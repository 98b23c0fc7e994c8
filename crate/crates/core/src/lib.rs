//! Robust orthogonal projectors for linear measurements under sparse
//! adversarial corruption.
//!
//! Given `y = A x⋆ + e` where `e` has at most `q` nonzero entries of arbitrary
//! size, the part of `x⋆` that can be determined no matter how `e` is chosen
//! is `U x⋆`, where `U` is the orthogonal projector onto the intersection of
//! the row spaces of every submatrix of `A` with `2q` rows removed.
//!
//! * [`projector`] computes `U` (and an exact-arithmetic reference).
//! * [`decoder`] finds an ℓ0-minimizer `x̂` of `||y - Ax||_0`; it satisfies
//!   `U x̂ = U x⋆`.
//! * [`recovery`] combines the two into the affine set `x̂ + ker(U)`.
//! * [`ambiguity`] works with the set of undetectable differences and
//!   certifies robustness of linear maps.
//!
//! ```
//! use robproj::{robust_projector, DenseMatrix, ProblemSpec, ToleranceConfig};
//!
//! let a = DenseMatrix::from_rows(&[
//!     vec![1.0, 0.0],
//!     vec![1.0, 0.0],
//!     vec![1.0, 0.0],
//!     vec![0.0, 1.0],
//!     vec![0.0, 1.0],
//! ])?;
//! let spec = ProblemSpec::new(a, 1)?;
//! let p = robust_projector(&spec, &ToleranceConfig::default())?;
//! assert_eq!(p.rank(), 1);
//! # Ok::<(), robproj::Error>(())
//! ```

pub mod ambiguity;
pub mod bench;
pub mod decoder;
pub mod error;
pub mod instance;
pub mod io;
pub mod numerics;
pub mod projector;
pub mod recovery;

pub use ambiguity::{
    ambiguity_member, certify_linear_robust, robustness_violation, span_ambiguity,
    sparse_pair_witness, AmbiguityCertificate, SparsePairWitness,
};
pub use decoder::{l0_decode, l0_decode_with, l0_residual_norm, DecodeOptions, DecodeResult, SearchOrder};
pub use error::{Error, Result};
pub use numerics::{
    kernel_basis, min_norm_solve, projector_onto_span, zero_eigenspace, DenseMatrix,
    OrthonormalBasis, ToleranceConfig,
};
pub use projector::{
    robust_projector, robust_projector_oracle, robust_projector_with, subset_count, ProblemSpec,
    ProjectorOptions, RobustProjector,
};
pub use recovery::{recover, recover_with, set_member, sets_equal, RecoverySet};
