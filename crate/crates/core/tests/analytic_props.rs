use num_complex::Complex64;
use proptest::prelude::*;
use thintrace::analytic::{
    additive_energy, exp_sum_sl2, gauss_sum_sr, oscillatory_jx, random_primitive_vectors,
    theta_break_check, theta_sum_gx, BumpFunction, Sl2Ball,
};
use thintrace::arith::factor::primes_below;
use thintrace::fit::loglog_fit;

#[test]
fn full_group_ball_grows_quadratically() {
    let phi = BumpFunction::default();
    let xs = [10.0, 20.0, 40.0, 80.0];
    let counts: Vec<f64> = xs
        .iter()
        .map(|&x| Sl2Ball::bump(x, &phi).unwrap().count().unwrap() as f64)
        .collect();
    let f = loglog_fit(&xs, &counts).unwrap();
    assert!((f.slope - 2.0).abs() <= 0.1, "{f:?}");
}

#[test]
fn exp_sum_symmetries() {
    let phi = BumpFunction::default();
    let x = 6.0;
    let mass = exp_sum_sl2(x, 1, [1, 0, 0, 0], &phi).unwrap();
    assert!(mass.im.abs() <= 1e-10 * mass.re);
    for s in random_primitive_vectors(4, 11) {
        let neg = [-s[0], -s[1], -s[2], -s[3]];
        for q in [2u64, 5, 12] {
            let a = exp_sum_sl2(x, q, s, &phi).unwrap().value();
            let b = exp_sum_sl2(x, q, neg, &phi).unwrap().value();
            assert!((a - b.conj()).norm() <= 1e-10 * mass.re);
            assert!(a.norm() <= mass.re * (1.0 + 1e-12));
        }
    }
}

#[test]
fn gauss_sums_have_square_root_size() {
    for r in primes_below(98).into_iter().filter(|&p| p > 2) {
        for a in 1..r as i64 {
            let s = gauss_sum_sr(r, a, 0).unwrap();
            assert!(
                (s.norm() - (r as f64).powf(-0.5)).abs() <= 1e-10,
                "r = {r}, a = {a}"
            );
        }
    }
}

#[test]
fn theta_decomposition() {
    let phi = BumpFunction::default();
    for (a, r) in [(1, 2), (1, 3), (2, 3), (1, 5), (2, 5), (3, 5), (4, 5)] {
        for lambda in [0.0, 0.3] {
            let c = theta_break_check(40.0, a, r, lambda, 20, &phi).unwrap();
            assert!(c.rel_err <= 1e-3, "{c:?}");
        }
    }
}

#[test]
fn oscillatory_integral_sizes() {
    let phi = BumpFunction::default();
    let mass = phi.integral();
    // stationary phase: |J| ≪ min(X, |β|^{-1/2})
    let j = oscillatory_jx(1000.0, 1e-2, 0.0, &phi).unwrap();
    assert!(j.norm() <= mass * 10.0, "{j}");
    for (x, beta) in [(50.0, 1e-1), (100.0, 1e-3), (200.0, 0.0)] {
        let j = oscillatory_jx(x, beta, 0.0, &phi).unwrap();
        let scale = if beta == 0.0 {
            x
        } else {
            x.min(1.0 / f64::sqrt(beta))
        };
        assert!(j.norm() <= mass * scale, "X = {x}, β = {beta}: {j}");
    }
    let x = 20.0;
    let near = oscillatory_jx(x, 0.0, 1.0 / x, &phi).unwrap().norm();
    let far = oscillatory_jx(x, 0.0, 10.0 / x, &phi).unwrap().norm();
    assert!(far < near * 1e-3, "{near} {far}");
}

#[test]
fn riemann_sum_of_the_bump() {
    let phi = BumpFunction::default();
    let mass = phi.integral();
    for x in [100.0, 150.0, 400.0] {
        let g = theta_sum_gx(x, 0.0, 0.0, &phi).unwrap();
        assert!((g.re / (x * mass) - 1.0).abs() < 0.01);
    }
}

#[test]
fn energy_identities() {
    for x in [3.0, 7.5, 12.0] {
        let r = additive_energy(x).unwrap();
        assert_eq!(r.n_zero, r.ball);
        assert_eq!(r.n_total, r.ball * r.ball);
        assert_eq!(r.energy, r.diff_energy);
        assert!(r.energy >= r.diagonal_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_sum_is_periodic_in_k(r in 1u64..60, a in -200i64..200, k in -500i64..500) {
        prop_assume!(num_integer::Integer::gcd(&a, &(r as i64)) == 1);
        let s1 = gauss_sum_sr(r, a, k).unwrap();
        let s2 = gauss_sum_sr(r, a + 3 * r as i64, k - 7 * r as i64).unwrap();
        prop_assert!((s1 - s2).norm() < 1e-12);
        prop_assert!(s1.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn exp_sum_mass_bound(q in 1u64..30, seed in 0u64..1000) {
        let phi = BumpFunction::new(4.0, 2.0).unwrap();
        let s = random_primitive_vectors(1, seed)[0];
        let v = exp_sum_sl2(3.0, q, s, &phi).unwrap();
        let m = exp_sum_sl2(3.0, 1, s, &phi).unwrap();
        prop_assert!(v.abs <= m.re * (1.0 + 1e-12));
        prop_assert!(Complex64::new(v.re, v.im).norm() == v.abs);
    }
}
