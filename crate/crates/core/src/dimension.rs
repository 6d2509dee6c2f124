//! Hausdorff dimension of the Cantor set of continued fractions with partial
//! quotients in `A`, as the zero of `s ↦ λ(s) − 1` where `λ(s)` is the leading
//! eigenvalue of the transfer operator
//!
//! ```text
//! L_s f(x) = Σ_{a ∈ A} (a + x)^{-2s} f(1/(a + x)).
//! ```
//!
//! `L_s` is discretized by collocation at Chebyshev points of `[0, 1]`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::Alphabet;

pub const DEFAULT_ORDER: usize = 32;
const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;
const S_LO: f64 = 0.01;
const S_HI: f64 = 0.999;

/// Collocation matrix of `L_s` on `order` Chebyshev nodes.
///
/// Entries are Lagrange basis values and may be negative.
#[derive(Debug, Clone)]
pub struct TransferOperatorApprox {
    pub letters: Vec<u64>,
    pub order: usize,
    pub s: f64,
    pub nodes: Vec<f64>,
    /// Row-major `order × order`.
    pub matrix: Vec<f64>,
}

fn chebyshev_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let theta = (2 * j + 1) as f64 * PI / (2 * n) as f64;
        nodes.push(0.5 * (1.0 + theta.cos()));
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        weights.push(sign * theta.sin());
    }
    (nodes, weights)
}

/// Values at `y` of the Lagrange basis on `nodes`, by the barycentric formula.
fn lagrange_row(nodes: &[f64], weights: &[f64], y: f64, out: &mut [f64]) {
    if let Some(k) = nodes.iter().position(|&x| x == y) {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[k] = 1.0;
        return;
    }
    let mut denom = 0.0;
    for ((o, &x), &w) in out.iter_mut().zip(nodes).zip(weights) {
        *o = w / (y - x);
        denom += *o;
    }
    out.iter_mut().for_each(|v| *v /= denom);
}

impl TransferOperatorApprox {
    pub fn new(alphabet: &Alphabet, s: f64, order: usize) -> Result<Self> {
        if order < 8 {
            return Err(Error::invalid(format!(
                "collocation order {order} is below 8"
            )));
        }
        if !(s > -1e-12 && s < 2.0) {
            return Err(Error::invalid(format!("s = {s} outside [0, 2)")));
        }
        let (nodes, weights) = chebyshev_nodes(order);
        let mut matrix = vec![0.0; order * order];
        let mut row = vec![0.0; order];
        for (i, &x) in nodes.iter().enumerate() {
            for &a in alphabet.letters() {
                let u = a as f64 + x;
                let weight = u.powf(-2.0 * s);
                lagrange_row(&nodes, &weights, 1.0 / u, &mut row);
                for (m, r) in matrix[i * order..(i + 1) * order].iter_mut().zip(&row) {
                    *m += weight * r;
                }
            }
        }
        Ok(TransferOperatorApprox {
            letters: alphabet.letters().to_vec(),
            order,
            s,
            nodes,
            matrix,
        })
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.order;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.matrix[i * n..(i + 1) * n]
                .iter()
                .zip(v)
                .map(|(m, x)| m * x)
                .sum();
        }
    }

    /// Leading eigenvalue by power iteration from the constant function.
    pub fn leading_eigenvalue(&self) -> Result<f64> {
        let n = self.order;
        let mut v = vec![1.0; n];
        let mut w = vec![0.0; n];
        let mut lambda = f64::NAN;
        for _ in 0..POWER_MAX_ITER {
            self.apply(&v, &mut w);
            let norm_v: f64 = v.iter().map(|x| x * x).sum();
            let next = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / norm_v;
            let scale = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if !(scale.is_finite() && scale > 0.0) {
                return Err(Error::NonConvergence("power iteration collapsed".into()));
            }
            w.iter_mut().for_each(|x| *x /= scale);
            std::mem::swap(&mut v, &mut w);
            if (next - lambda).abs() <= POWER_TOL * next.abs() {
                return Ok(next);
            }
            lambda = next;
        }
        Err(Error::NonConvergence(format!(
            "power iteration did not settle in {POWER_MAX_ITER} steps"
        )))
    }
}

/// `λ(s)` for the collocation operator of the given order.
pub fn transfer_eigenvalue(alphabet: &Alphabet, s: f64, order: usize) -> Result<f64> {
    TransferOperatorApprox::new(alphabet, s, order)?.leading_eigenvalue()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub delta: f64,
    pub order: usize,
    pub tol: f64,
    /// `λ(δ) − 1` at the returned root.
    pub residual: f64,
    /// Root found with twice the collocation order.
    pub delta_doubled: f64,
    /// Whether the two orders agree within `10·tol`.
    pub stable: bool,
    /// Set for one-letter alphabets, whose limit set is a single point.
    pub degenerate: bool,
}

fn bisect(alphabet: &Alphabet, order: usize, tol: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (S_LO, S_HI);
    let f_lo = transfer_eigenvalue(alphabet, lo, order)? - 1.0;
    if f_lo < 0.0 {
        return Err(Error::NonConvergence(format!(
            "λ({S_LO}) < 1: no root to bracket"
        )));
    }
    let f_hi = transfer_eigenvalue(alphabet, hi, order)? - 1.0;
    if f_hi > 0.0 {
        return Err(Error::NonConvergence(format!(
            "λ({S_HI}) > 1: dimension above the search range"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if transfer_eigenvalue(alphabet, mid, order)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = 0.5 * (lo + hi);
    Ok((delta, transfer_eigenvalue(alphabet, delta, order)? - 1.0))
}

/// Root of `λ(s) = 1` by bisection on `[0.01, 0.999]`, with an order-doubling
/// stability check.
pub fn estimate_dimension(
    alphabet: &Alphabet,
    order: usize,
    tol: f64,
) -> Result<DimensionEstimate> {
    if !(tol >= 1e-12) {
        return Err(Error::invalid(format!("tolerance {tol} below 1e-12")));
    }
    if alphabet.len() == 1 {
        return Ok(DimensionEstimate {
            delta: 0.0,
            order,
            tol,
            residual: 0.0,
            delta_doubled: 0.0,
            stable: true,
            degenerate: true,
        });
    }
    let (delta, residual) = bisect(alphabet, order, tol)?;
    let (delta_doubled, _) = bisect(alphabet, 2 * order, tol)?;
    Ok(DimensionEstimate {
        delta,
        order,
        tol,
        residual,
        delta_doubled,
        stable: (delta - delta_doubled).abs() <= 10.0 * tol,
        degenerate: false,
    })
}

/// Fast low-order dimension, good to about `10⁻⁴`; used for size estimates.
pub fn quick_dimension(alphabet: &Alphabet) -> f64 {
    if alphabet.len() == 1 {
        return 0.0;
    }
    bisect(alphabet, 16, 1e-5).map(|(d, _)| d).unwrap_or(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(v: &[u64]) -> Alphabet {
        Alphabet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn single_branch() {
        let a = alpha(&[1]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let l = transfer_eigenvalue(&a, 1.0, 32).unwrap();
        assert!((l - phi.powi(-2)).abs() < 1e-10, "{l}");
        let l0 = transfer_eigenvalue(&a, 0.0, 32).unwrap();
        assert!((l0 - 1.0).abs() < 1e-12);
        let est = estimate_dimension(&a, 32, 1e-6).unwrap();
        assert_eq!(est.delta, 0.0);
        assert!(est.degenerate);
    }

    #[test]
    fn zaremba_pair() {
        let a = alpha(&[1, 2]);
        let l = transfer_eigenvalue(&a, 0.5313, 32).unwrap();
        assert!((l - 1.0).abs() < 1e-3, "{l}");
        let est = estimate_dimension(&a, 32, 1e-9).unwrap();
        assert!((est.delta - 0.5313).abs() < 1e-3, "{est:?}");
        assert!(est.delta > 0.5 && est.stable);
        assert!(est.residual.abs() < 1e-6);
    }

    #[test]
    fn ten_letters() {
        let a = Alphabet::range(1, 10).unwrap();
        let est = estimate_dimension(&a, 32, 1e-8).unwrap();
        assert!((est.delta - 0.9257).abs() < 1e-3, "{est:?}");
    }

    #[test]
    fn eigenvalue_decreasing_in_s() {
        for letters in [&[1u64, 2][..], &[1, 2, 3], &[2, 3, 7], &[1, 2, 3, 4, 5]] {
            let a = alpha(letters);
            let mut prev = f64::INFINITY;
            for k in 0..=14 {
                let s = 0.1 + 0.1 * k as f64;
                let l = transfer_eigenvalue(&a, s, 24).unwrap();
                assert!(l < prev, "A = {letters:?}, s = {s}");
                prev = l;
            }
        }
    }

    #[test]
    fn nested_alphabets_increase() {
        let mut prev = 0.0;
        for top in 2..=10 {
            let d = estimate_dimension(&Alphabet::range(1, top).unwrap(), 24, 1e-7)
                .unwrap()
                .delta;
            assert!(d > prev, "top = {top}");
            prev = d;
        }
    }

    #[test]
    fn rejects_bad_input() {
        let a = alpha(&[1, 2]);
        assert!(transfer_eigenvalue(&a, 0.5, 4).is_err());
        assert!(transfer_eigenvalue(&a, 2.5, 16).is_err());
        assert!(estimate_dimension(&a, 16, 1e-13).is_err());
    }
}
