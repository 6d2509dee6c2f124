//! One test per acceptance criterion. Each prints a PASS/FAIL line straight to
//! stderr, so the verdicts show up even when libtest captures output.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use thintrace::analytic::{
    energy_fit, exp_sum_sweep, gauss_sum_sr, random_primitive_vectors, theta_break_sweep,
    BumpFunction,
};
use thintrace::arith::factor::{is_square_free, primes_below};
use thintrace::arith::{ContinuedFraction, Mat2, QuadraticIrrational};
use thintrace::dimension::estimate_dimension;
use thintrace::distribution::{build_sequence_an, level_sweep, orthogonality_count, AlephSet};
use thintrace::geodesics::{geodesic_height, ClosedGeodesic};
use thintrace::local::{beta, rho, sl2_size, trace_zero_count_bruteforce};
use thintrace::semigroup::{closure_mod_q, hensley_fit, trace_profile, Alphabet};

fn verdict(n: u32, pass: bool, start: Instant, limit: Duration, detail: String) {
    let took = start.elapsed();
    let ok = pass && took <= limit;
    let tag = if ok { "PASS" } else { "FAIL" };
    let line = format!(
        "{tag} criterion {n}: {detail} [{:.2}s, limit {}s]",
        took.as_secs_f64(),
        limit.as_secs()
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(ok, "{line}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const WORKED_PERIOD: [i64; 28] = [
    2, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 1, 3, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 1, 1,
];
const TYPICAL_PERIOD: [i64; 16] = [2, 2, 4, 2, 1, 3, 2, 62, 2, 5, 5, 1, 9, 1, 1, 1];

#[test]
fn criterion_01_trace_zero_fraction() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let count = trace_zero_count_bruteforce(p).unwrap();
        let size = sl2_size(p).unwrap();
        let frac = BigRational::new(BigInt::from(count), BigInt::from(size));
        if frac != beta(p).unwrap() {
            bad.push(p);
        }
    }
    verdict(
        1,
        bad.is_empty(),
        start,
        secs(30),
        format!("brute-force fraction = β(p) for p ≤ 31, mismatches {bad:?}"),
    );
}

#[test]
fn criterion_02_rho_identity() {
    let start = Instant::now();
    let primes = primes_below(1001);
    let bad: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| {
            let lhs = BigRational::from_integer(BigInt::from(1)) + rho(p).unwrap();
            let rhs = BigRational::from_integer(BigInt::from(p)) * beta(p).unwrap();
            lhs != rhs
        })
        .collect();
    verdict(
        2,
        bad.is_empty(),
        start,
        secs(1),
        format!(
            "1 + ρ(p) = pβ(p) for {} primes ≤ 1000, mismatches {bad:?}",
            primes.len()
        ),
    );
}

#[test]
fn criterion_03_trace_49_missing() {
    let start = Instant::now();
    let a = Alphabet::range(1, 10).unwrap();
    let delta = estimate_dimension(&a, 32, 1e-8).unwrap().delta;
    let rows = trace_profile(&a, 1000, delta).unwrap();
    let m = |t: u64| rows.iter().find(|r| r.t == t).unwrap().multiplicity;
    let missing: Vec<u64> = (50..=1000).filter(|&t| m(t) == 0).collect();
    let pass = m(49) == 0 && missing.is_empty();
    verdict(
        3,
        pass,
        start,
        secs(600),
        format!(
            "M(49) = {}, traces in [50, 1000] with M = 0: {missing:?}",
            m(49)
        ),
    );
}

#[test]
fn criterion_04_dimension() {
    let start = Instant::now();
    let big = estimate_dimension(&Alphabet::range(1, 10).unwrap(), 32, 1e-9).unwrap();
    let two = estimate_dimension(&Alphabet::new([1, 2]).unwrap(), 32, 1e-9).unwrap();
    let pass = (big.delta - 0.9257).abs() <= 0.001
        && two.delta > 0.5
        && (two.delta - two.delta_doubled).abs() <= 0.001;
    verdict(
        4,
        pass,
        start,
        secs(60),
        format!(
            "δ{{1..10}} = {:.10}, δ{{1,2}} = {:.10} (doubled order {:.10})",
            big.delta, two.delta, two.delta_doubled
        ),
    );
}

#[test]
fn criterion_05_hensley_growth() {
    let start = Instant::now();
    let bounds = [50.0, 100.0, 200.0, 400.0, 800.0];
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [
        Alphabet::new([1, 2]).unwrap(),
        Alphabet::range(1, 10).unwrap(),
    ] {
        let delta = estimate_dimension(&a, 32, 1e-9).unwrap().delta;
        let fit = hensley_fit(&a, &bounds).unwrap();
        pass &= (fit.exponent - 2.0 * delta).abs() <= 0.1;
        parts.push(format!(
            "{a}: slope {:.4} vs 2δ {:.4}",
            fit.exponent,
            2.0 * delta
        ));
    }
    verdict(5, pass, start, secs(300), parts.join("; "));
}

#[test]
fn criterion_06_worked_example() {
    let start = Instant::now();
    let m = Mat2::new(80198051i64, 50843528, 33895684, 21489003).to_big();
    let g = ClosedGeodesic::new(m).unwrap();
    let root = BigInt::from(2 * 41 * 71 * 2521u64);
    let expected_fixed = QuadraticIrrational::new(2521, 2521, 2911, 3).unwrap();
    let checks = [
        g.trace == BigInt::from(101687054u64),
        g.discriminant == BigInt::from(10340256951198912u64),
        g.discriminant == BigInt::from(12) * &root * &root,
        g.sqf == 3,
        g.fixed_point == expected_fixed,
        g.expansion.is_purely_periodic() && g.expansion.period() == WORKED_PERIOD,
        ContinuedFraction::purely_periodic(WORKED_PERIOD.to_vec())
            .unwrap()
            .value_quadratic()
            .unwrap()
            == expected_fixed,
    ];
    verdict(
        6,
        checks.iter().all(|&c| c),
        start,
        secs(1),
        format!("trace, D, D = 12·(2·41·71·2521)², fixed point, period: {checks:?}"),
    );
}

#[test]
fn criterion_07_geodesic_heights() {
    let start = Instant::now();
    let low = geodesic_height(&WORKED_PERIOD).unwrap();
    let high = geodesic_height(&TYPICAL_PERIOD).unwrap();
    let pass = low < 2.0 && (31.0..=32.0).contains(&high);
    verdict(
        7,
        pass,
        start,
        secs(1),
        format!("heights {low:.7} (need < 2) and {high:.5} (need in [31, 32])"),
    );
}

#[test]
fn criterion_08_gauss_sums() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in primes_below(98).into_iter().filter(|&p| p > 2) {
        for a in 1..r as i64 {
            let s = gauss_sum_sr(r, a, 0).unwrap();
            worst = worst.max((s.norm() - (r as f64).powf(-0.5)).abs());
        }
    }
    verdict(
        8,
        worst <= 1e-10,
        start,
        secs(1),
        format!("max ||S_r(a;0)| − r^(−1/2)| = {worst:.3e}"),
    );
}

#[test]
fn criterion_09_theta_poisson() {
    let start = Instant::now();
    let phi = BumpFunction::default();
    let mut worst: f64 = 0.0;
    for r in [2u64, 3, 5] {
        for c in theta_break_sweep(200.0, r, &[0.0, 1.0 / 7.0], 20, &phi).unwrap() {
            worst = worst.max(c.rel_err);
        }
    }
    verdict(
        9,
        worst <= 1e-3,
        start,
        secs(10),
        format!("X = 200, worst |G − Poisson side| / Σφ(x/X) = {worst:.3e}"),
    );
}

#[test]
fn criterion_10_exp_sum_regime() {
    let start = Instant::now();
    let phi = BumpFunction::default();
    let ss = random_primitive_vectors(20, 20_240_601);
    let mut worst = (0.0f64, 0.0f64, 0u64);
    for x in [20.0, 40.0, 80.0] {
        let qs: Vec<u64> = (1..=x as u64).filter(|&q| is_square_free(q)).collect();
        for r in exp_sum_sweep(x, &qs, &ss, &phi).unwrap() {
            if r.ratio > worst.0 {
                worst = (r.ratio, r.x, r.q);
            }
        }
    }
    verdict(
        10,
        worst.0 <= 10.0,
        start,
        secs(600),
        format!(
            "max |S|/(q^(−3/2)X² + X^(3/2) + qX) = {:.1} at X = {}, q = {}",
            worst.0, worst.1, worst.2
        ),
    );
}

#[test]
fn criterion_11_additive_energy() {
    let start = Instant::now();
    let xs = [10.0, 20.0, 40.0, 80.0];
    let fit = energy_fit(&xs).unwrap();
    let exact = fit
        .reports
        .iter()
        .all(|r| r.energy >= 2 * r.ball * r.ball - r.ball && r.n_total == r.ball * r.ball);
    let pass = exact && (3.8..=4.7).contains(&fit.exponent);
    let sizes: Vec<(u64, u64)> = fit.reports.iter().map(|r| (r.ball, r.energy)).collect();
    verdict(
        11,
        pass,
        start,
        secs(900),
        format!(
            "(ball, E) = {sizes:?}, bounds exact: {exact}, exponent {:.3}",
            fit.exponent
        ),
    );
}

#[test]
fn criterion_12_strong_approximation() {
    let start = Instant::now();
    let a = Alphabet::new([1, 2]).unwrap();
    let sizes: Vec<(u64, usize, u128)> = [2u64, 3, 5, 6, 7]
        .iter()
        .map(|&q| {
            (
                q,
                closure_mod_q(&a, q).unwrap().size(),
                sl2_size(q).unwrap(),
            )
        })
        .collect();
    let pass = sizes.iter().all(|&(_, got, want)| got as u128 == want);
    verdict(
        12,
        pass,
        start,
        secs(10),
        format!("(q, closure, |SL₂(q)|) = {sizes:?}"),
    );
}

#[test]
fn criterion_13_level_decay() {
    let start = Instant::now();
    let a = Alphabet::range(1, 10).unwrap();
    let mut ratios = Vec::new();
    let mut normalized = Vec::new();
    for n in [100.0, 200.0, 400.0, 800.0] {
        let row = level_sweep(&a, n, &[0.25]).unwrap().rows[0].clone();
        ratios.push(row.ratio);
        normalized.push(row.ratio_beta);
    }
    let pass = ratios.windows(2).all(|w| w[1] < w[0]);
    verdict(
        13,
        pass,
        start,
        secs(600),
        format!("Σ|r_q|/total over N = 100..800: {ratios:.4?} (β-normalized: {normalized:.5?})"),
    );
}

#[test]
fn criterion_14_orthogonality() {
    let start = Instant::now();
    let a = Alphabet::new([1, 2]).unwrap();
    let seq = build_sequence_an(&a, 6.0, 6.0, &AlephSet::identity()).unwrap();
    let mut worst: f64 = 0.0;
    for q in (1..=30u64).filter(|&q| is_square_free(q)) {
        let direct = seq.count_divisible(q) as f64;
        let v = orthogonality_count(&seq, q).unwrap();
        worst = worst.max((v.re - direct).abs().max(v.im.abs()) / direct.max(1.0));
    }
    let pairs = seq.xi.len() * seq.omega.len();
    verdict(
        14,
        worst <= 1e-8,
        start,
        secs(60),
        format!("{pairs} pairs, worst relative gap {worst:.3e} over square-free q ≤ 30"),
    );
}
