mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;

use common::{gaussian, rng, structured};
use robproj::numerics::numerical_rank;
use robproj::{kernel_basis, min_norm_solve, projector_onto_span, zero_eigenspace, DenseMatrix, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_projector_annihilates_and_is_idempotent(seed: u64, m in 1usize..8, n in 1usize..8, low_rank: bool) {
        let mut r = rng(seed);
        let a = if low_rank { structured(&mut r, m, n) } else { gaussian(&mut r, m, n) };
        let basis = kernel_basis(&a, &tol());
        prop_assert!(basis.orthonormality_error() <= 1e-12);
        let p = projector_onto_span(&basis);
        let ap = a.matmul(&p);
        prop_assert!(ap.max_abs() <= 1e-9 * a.max_abs().max(1.0));
        prop_assert!(p.matmul(&p).max_abs_diff(&p) <= 1e-10);
        prop_assert_eq!(p.asymmetry(), 0.0);
    }

    #[test]
    fn rank_nullity(seed: u64, m in 1usize..8, n in 1usize..8) {
        let a = gaussian(&mut rng(seed), m, n);
        prop_assert_eq!(numerical_rank(&a, &tol()) + kernel_basis(&a, &tol()).len(), n);
        prop_assert_eq!(numerical_rank(&a, &tol()), m.min(n));
    }

    #[test]
    fn zero_eigenspace_residual(seed: u64, n in 1usize..7, k in 0usize..7) {
        // C = G G^T with G of rank <= k has a zero eigenspace of dimension n - rank.
        let mut r = rng(seed);
        let g = gaussian(&mut r, n, k.max(1));
        let g = if k == 0 { DenseMatrix::zeros(n, 1) } else { g };
        let c = g.matmul(&g.transpose());
        let mut sym = c.as_nalgebra().clone();
        for i in 0..n {
            for j in 0..i {
                sym[(j, i)] = sym[(i, j)];
            }
        }
        let c = DenseMatrix::from_nalgebra(sym).unwrap();
        let z = zero_eigenspace(&c, &tol()).unwrap();
        prop_assert_eq!(z.len(), n - k.min(n));
        let c_norm = c.as_nalgebra().norm();
        for v in z.vectors() {
            let cv = c.mul_vec(&v);
            prop_assert!(common::norm(&cv) <= tol().eig_zero * (1.0 + c_norm));
        }
    }

    #[test]
    fn min_norm_solve_matches_normal_equations(seed: u64, m in 1usize..8, n in 1usize..8) {
        // Independent route: for full row rank, x = A^T (A A^T)^{-1} b;
        // for full column rank, x = (A^T A)^{-1} A^T b.
        let mut r = rng(seed);
        let a = gaussian(&mut r, m, n);
        let b = common::normal_vec(&mut r, m);
        let (x, res) = min_norm_solve(&a, &b, &tol()).unwrap();
        let am = a.as_nalgebra();
        let sv = am.singular_values();
        prop_assume!(sv.max() <= 1e3 * sv.min());
        let bv = nalgebra::DVector::from_column_slice(&b);
        let expected = if m <= n {
            let g = am * am.transpose();
            am.transpose() * g.lu().solve(&bv).unwrap()
        } else {
            let g = am.transpose() * am;
            g.lu().solve(&(am.transpose() * &bv)).unwrap()
        };
        let scale = 1.0 + expected.norm();
        for (xi, ei) in x.iter().zip(expected.iter()) {
            prop_assert!((xi - ei).abs() <= 1e-6 * scale, "{xi} vs {ei}");
        }
        let true_res = (am * DMatrix::from_column_slice(n, 1, &x) - DMatrix::from_column_slice(m, 1, &b)).norm();
        prop_assert!((res - true_res).abs() <= 1e-12 * (1.0 + true_res));
    }
}
