mod common;

use proptest::prelude::*;

use common::{ambiguity_sample, gaussian, integer_structured, rng, structured};
use robproj::{
    robust_projector, robust_projector_oracle, robust_projector_with, subset_count, DenseMatrix,
    ProblemSpec, ProjectorOptions, ToleranceConfig,
};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (3usize..9, 1usize..6).prop_flat_map(|(m, n)| (Just(m), Just(n), 0..=(m - 1) / 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projector_is_symmetric_idempotent_and_counts_subsets(seed: u64, (m, n, q) in dims(), low_rank: bool) {
        let mut r = rng(seed);
        let a = if low_rank { structured(&mut r, m, n) } else { gaussian(&mut r, m, n) };
        let spec = ProblemSpec::new(a, q).unwrap();
        let p = robust_projector(&spec, &tol()).unwrap();
        let u = p.u();
        prop_assert!(u.asymmetry() <= 1e-12);
        prop_assert!(u.matmul(u).max_abs_diff(u) <= 1e-10);
        prop_assert_eq!(p.rank() + p.kernel_basis().len(), n);
        prop_assert_eq!(p.subsets_processed(), subset_count(m, q).unwrap());
        for v in p.image_basis().vectors() {
            prop_assert!(common::norm(&common::diff(&p.apply(&v), &v)) <= 1e-10);
        }
        for v in p.kernel_basis().vectors() {
            prop_assert!(common::norm(&p.apply(&v)) <= 1e-10);
        }
    }

    #[test]
    fn projector_annihilates_ambiguity_members(seed: u64, (m, n, q) in dims()) {
        let mut r = rng(seed);
        let spec = ProblemSpec::new(structured(&mut r, m, n), q).unwrap();
        let p = robust_projector(&spec, &tol()).unwrap();
        for _ in 0..5 {
            if let Some(v) = ambiguity_sample(&spec, &mut r, &tol()) {
                prop_assert!(common::norm(&p.apply(&v)) <= 1e-8 * (1.0 + common::norm(&v)));
            }
        }
    }

    #[test]
    fn larger_budget_shrinks_robust_subspace(seed: u64, (m, n, q) in dims()) {
        prop_assume!(2 * (q + 1) < m);
        let mut r = rng(seed);
        let a = structured(&mut r, m, n);
        let u1 = robust_projector(&ProblemSpec::new(a.clone(), q).unwrap(), &tol()).unwrap();
        let u2 = robust_projector(&ProblemSpec::new(a, q + 1).unwrap(), &tol()).unwrap();
        prop_assert!(u2.u().matmul(u1.u()).max_abs_diff(u2.u()) <= 1e-8);
        prop_assert!(u2.rank() <= u1.rank());
    }

    #[test]
    fn row_scaling_leaves_projector_unchanged(seed: u64, (m, n, q) in dims(), row in 0usize..9, scale in prop_oneof![-10.0..-0.1, 0.1..10.0f64]) {
        let mut r = rng(seed);
        let a = structured(&mut r, m, n);
        let mut rows = a.to_rows();
        let row = row % m;
        for x in rows[row].iter_mut() {
            *x *= scale;
        }
        let scaled = DenseMatrix::from_rows(&rows).unwrap();
        let u1 = robust_projector(&ProblemSpec::new(a, q).unwrap(), &tol()).unwrap();
        let u2 = robust_projector(&ProblemSpec::new(scaled, q).unwrap(), &tol()).unwrap();
        prop_assert!(u1.u().max_abs_diff(u2.u()) <= 1e-8);
    }

    #[test]
    fn oracle_agrees_on_integer_matrices(seed: u64, (m, n, q) in dims()) {
        let spec = ProblemSpec::new(integer_structured(&mut rng(seed), m, n), q).unwrap();
        let fast = robust_projector(&spec, &tol()).unwrap();
        let exact = robust_projector_oracle(&spec, &tol()).unwrap();
        prop_assert_eq!(fast.rank(), exact.rank());
        prop_assert!(fast.u().max_abs_diff(exact.u()) <= 1e-8);
    }

    #[test]
    fn zero_budget_gives_rowspan_projector(seed: u64, m in 1usize..7, n in 1usize..7) {
        let a = structured(&mut rng(seed), m, n);
        let p = robust_projector(&ProblemSpec::new(a.clone(), 0).unwrap(), &tol()).unwrap();
        // Rowspan projector by the pseudoinverse: A^+ A.
        let pinv = a.as_nalgebra().clone().pseudo_inverse(1e-10).unwrap();
        let rowspan = DenseMatrix::from_nalgebra(pinv * a.as_nalgebra()).unwrap();
        prop_assert!(p.u().max_abs_diff(&rowspan) <= 1e-8);
    }
}

#[test]
fn gaussian_oracle_agreement_on_six_by_four() {
    for seed in 0..10 {
        let a = gaussian(&mut rng(seed), 6, 4);
        let spec = ProblemSpec::new(a, 1).unwrap();
        let fast = robust_projector(&spec, &tol()).unwrap();
        let exact = robust_projector_oracle(&spec, &tol()).unwrap();
        assert!(fast.u().max_abs_diff(exact.u()) <= 1e-8, "seed {seed}");
        // 4 kept rows of a generic 6x4 matrix span R^4.
        assert_eq!(fast.rank(), 4);
    }
}

#[test]
fn parallel_reduction_is_deterministic() {
    let a = structured(&mut rng(99), 14, 5);
    let spec = ProblemSpec::new(a, 3).unwrap();
    let par = ProjectorOptions {
        parallel: true,
        early_exit: false,
    };
    let first = robust_projector_with(&spec, &tol(), par).unwrap();
    for _ in 0..3 {
        let again = robust_projector_with(&spec, &tol(), par).unwrap();
        assert_eq!(first.u(), again.u());
    }
    assert_eq!(first.u(), robust_projector(&spec, &tol()).unwrap().u());
}
