mod common;

use itertools::Itertools;
use rand::Rng;

use common::{brute_force_min_drop, corrupt, diff, gaussian, norm, normal_vec, rng, structured};
use robproj::{
    ambiguity_member, l0_decode, l0_residual_norm, robust_projector, Error, ProblemSpec,
    ToleranceConfig,
};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

#[test]
fn random_eight_by_three_recovers_robust_part() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let a = gaussian(&mut r, 8, 3);
        let spec = ProblemSpec::new(a, 2).unwrap();
        let x_star = normal_vec(&mut r, 3);
        let mut y = spec.a().mul_vec(&x_star);
        let mut rows: Vec<usize> = (0..8).collect();
        for i in (1..8).rev() {
            rows.swap(i, r.random_range(0..=i));
        }
        for &i in &rows[..2] {
            y[i] += if r.random::<bool>() { 10.0 } else { -10.0 };
        }
        let dec = l0_decode(&spec, &y, &tol()).unwrap();
        let p = robust_projector(&spec, &tol()).unwrap();
        let gap = norm(&diff(&p.apply(&dec.x_hat), &p.apply(&x_star)));
        assert!(gap <= 1e-8, "seed {seed}: {gap}");
    }
}

#[test]
fn decoded_support_is_minimal_and_optimal() {
    let mut r = rng(31);
    for _ in 0..80 {
        let m = r.random_range(5..9);
        let n = r.random_range(2..5);
        let q = r.random_range(1..(m - 1) / 2 + 1);
        let a = if r.random::<bool>() { structured(&mut r, m, n) } else { gaussian(&mut r, m, n) };
        let spec = ProblemSpec::new(a, q).unwrap();
        let x_star = normal_vec(&mut r, n);
        let k = r.random_range(0..q + 1);
        let (y, e) = corrupt(&mut r, spec.a(), &x_star, k);

        let dec = l0_decode(&spec, &y, &tol()).unwrap();
        let oracle_k = brute_force_min_drop(spec.a(), &y, q).expect("truth is within budget");
        assert_eq!(dec.dropped_rows.len(), oracle_k);
        assert!(dec.support.iter().all(|i| dec.dropped_rows.contains(i)));
        assert_eq!(dec.support_size, dec.support.len());

        let best = l0_residual_norm(&spec, &y, &dec.x_hat, &tol()).unwrap();
        assert_eq!(best, dec.support_size);
        let truth = l0_residual_norm(&spec, &y, &x_star, &tol()).unwrap();
        assert!(best <= truth);
        assert!(truth <= e.iter().filter(|&&v| v != 0.0).count());
        for _ in 0..5 {
            let x = normal_vec(&mut r, n);
            assert!(best <= l0_residual_norm(&spec, &y, &x, &tol()).unwrap());
        }

        let d = diff(&x_star, &dec.x_hat);
        assert!(ambiguity_member(&spec, &d, &tol()).unwrap().is_member);
    }
}

#[test]
fn every_smaller_drop_set_is_inconsistent() {
    let mut r = rng(77);
    for _ in 0..30 {
        let spec = ProblemSpec::new(gaussian(&mut r, 7, 2), 2).unwrap();
        let x_star = normal_vec(&mut r, 2);
        let (y, _) = corrupt(&mut r, spec.a(), &x_star, 2);
        let dec = l0_decode(&spec, &y, &tol()).unwrap();
        for k in 0..dec.dropped_rows.len() {
            for d in (0..7).combinations(k) {
                let kept: Vec<usize> = (0..7).filter(|i| !d.contains(i)).collect();
                assert!(!common::consistent_by_rank(spec.a(), &y, &kept));
            }
        }
    }
}

#[test]
fn over_budget_corruption_reports_budget_exceeded() {
    let mut r = rng(3);
    let spec = ProblemSpec::new(gaussian(&mut r, 9, 2), 1).unwrap();
    let x_star = normal_vec(&mut r, 2);
    let (y, _) = corrupt(&mut r, spec.a(), &x_star, 4);
    match l0_decode(&spec, &y, &tol()) {
        Err(e @ Error::BudgetExceeded { .. }) => assert_eq!(e.exit_code(), 2),
        other => panic!("expected BudgetExceeded, got {other:?}"),
    }
}
