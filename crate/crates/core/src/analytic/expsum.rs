//! `Σ_ξ φ_X(ξ) e_q(ξ·s)` over the smooth `SL₂(ℤ)` ball.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bump::BumpFunction;
use super::sl2ball::Sl2Ball;
use crate::arith::Mat2;
use crate::error::{Error, Result};

/// Range of the entries of seeded random vectors.
pub const RANDOM_ENTRY_MAX: i64 = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpSumResult {
    pub x: f64,
    pub q: u64,
    pub s: [i64; 4],
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `q^{−3/2}X² + X^{3/2} + qX`.
    pub bound: f64,
    pub ratio: f64,
}

impl ExpSumResult {
    fn new(x: f64, q: u64, s: [i64; 4], value: Complex64) -> Self {
        let qf = q as f64;
        let bound = qf.powf(-1.5) * x * x + x.powf(1.5) + qf * x;
        let abs = value.norm();
        ExpSumResult {
            x,
            q,
            s,
            re: value.re,
            im: value.im,
            abs,
            bound,
            ratio: abs / bound,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

pub fn is_primitive(s: &[i64; 4]) -> bool {
    s.iter().fold(0i64, |g, v| g.gcd(v)) == 1
}

fn check_inputs(q: u64, s: &[i64; 4]) -> Result<()> {
    if q == 0 {
        return Err(Error::invalid("modulus q must be positive"));
    }
    if !is_primitive(s) {
        return Err(Error::invalid(format!("{s:?} is not primitive")));
    }
    if s.iter().any(|v| v.abs() > 1 << 20) {
        return Err(Error::invalid(format!("{s:?} has an entry beyond 2^20")));
    }
    Ok(())
}

fn dot(m: &Mat2<i64>, s: &[i64; 4]) -> i64 {
    m.a * s[0] + m.b * s[1] + m.c * s[2] + m.d * s[3]
}

/// `e(j/q)` for `0 ≤ j < q`.
fn roots_of_unity(q: u64) -> Vec<Complex64> {
    (0..q)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / q as f64))
        .collect()
}

fn weight(table: &[f64], reach: i64, m: &Mat2<i64>) -> f64 {
    let f = |v: i64| table[(v + reach) as usize];
    f(m.a + m.d) * f(m.a - m.d) * f(m.b + m.c) * f(m.b - m.c)
}

/// Direct evaluation by one pass over the ball.
pub fn exp_sum_sl2(x: f64, q: u64, s: [i64; 4], phi: &BumpFunction) -> Result<ExpSumResult> {
    check_inputs(q, &s)?;
    let ball = Sl2Ball::bump(x, phi)?;
    let (table, reach) = phi.table(x);
    let roots = roots_of_unity(q);
    let qi = q as i64;
    let parts = ball.fold_chunks(
        || Complex64::new(0.0, 0.0),
        |acc, m| {
            let j = dot(&m, &s).rem_euclid(qi) as usize;
            *acc += roots[j] * weight(&table, reach, &m);
        },
    )?;
    Ok(ExpSumResult::new(x, q, s, parts.into_iter().sum()))
}

/// Every `(q, s)` pair from one pass over the ball: the weights are binned by
/// the value of `ξ·s`, and each modulus then folds the bins.
pub fn exp_sum_sweep(
    x: f64,
    qs: &[u64],
    ss: &[[i64; 4]],
    phi: &BumpFunction,
) -> Result<Vec<ExpSumResult>> {
    for s in ss {
        for &q in qs {
            check_inputs(q, s)?;
        }
    }
    let ball = Sl2Ball::bump(x, phi)?;
    let (table, reach) = phi.table(x);
    // |ξ·s| ≤ max|sᵢ| · (|a|+|b|+|c|+|d|) ≤ 2·reach·max|sᵢ|
    let offsets: Vec<i64> = ss
        .iter()
        .map(|s| 2 * reach * s.iter().map(|v| v.abs()).max().unwrap_or(0))
        .collect();
    let mut hists: Vec<Vec<f64>> = offsets
        .iter()
        .map(|&o| vec![0.0; (2 * o + 1) as usize])
        .collect();
    ball.for_each(|m| {
        let w = weight(&table, reach, &m);
        if w == 0.0 {
            return;
        }
        for ((h, s), &o) in hists.iter_mut().zip(ss).zip(&offsets) {
            h[(dot(&m, s) + o) as usize] += w;
        }
    })?;
    let mut out = Vec::with_capacity(ss.len() * qs.len());
    for ((h, s), &o) in hists.iter().zip(ss).zip(&offsets) {
        for &q in qs {
            let qi = q as i64;
            let mut bins = vec![0.0; q as usize];
            for (i, &v) in h.iter().enumerate() {
                bins[(i as i64 - o).rem_euclid(qi) as usize] += v;
            }
            let value: Complex64 = roots_of_unity(q)
                .iter()
                .zip(&bins)
                .map(|(r, &b)| r * b)
                .sum();
            out.push(ExpSumResult::new(x, q, *s, value));
        }
    }
    Ok(out)
}

/// `count` primitive vectors with entries in `[−50, 50]`, reproducible from
/// `seed`.
pub fn random_primitive_vectors(count: usize, seed: u64) -> Vec<[i64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s: [i64; 4] =
            std::array::from_fn(|_| rng.gen_range(-RANDOM_ENTRY_MAX..=RANDOM_ENTRY_MAX));
        if is_primitive(&s) {
            out.push(s);
        }
    }
    out
}
