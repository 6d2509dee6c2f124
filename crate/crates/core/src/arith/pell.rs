use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor::isqrt_u64;
use crate::error::{Error, Result};

/// Least solution `t > 2` of `t² − Δ s² = 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub t: BigInt,
    pub s: BigInt,
    pub delta: u64,
}

impl PellSolution {
    pub fn verify(&self) -> bool {
        &self.t * &self.t - BigInt::from(self.delta) * &self.s * &self.s == BigInt::from(4)
    }
}

/// Fundamental solution of `t² − Δ s² = 4`.
///
/// Any solution reduces (after dividing out `gcd(t, s) ∈ {1, 2}`) to a
/// fraction within `1/(2s²)` of `√Δ` once `Δ > 16`, hence to a convergent of
/// `√Δ`; the first convergent with `p² − Δq² ∈ {1, 4}` is therefore minimal.
/// Small `Δ` are settled by direct search.
pub fn pell_fundamental(delta: u64) -> Result<PellSolution> {
    if delta == 0 {
        return Err(Error::invalid("Δ must be positive"));
    }
    let root = isqrt_u64(delta);
    if root * root == delta {
        return Err(Error::PerfectSquare(delta.to_string()));
    }
    if delta < 16 {
        for s in 1u64.. {
            let t2 = delta * s * s + 4;
            let t = isqrt_u64(t2);
            if t * t == t2 {
                return Ok(PellSolution {
                    t: t.into(),
                    s: s.into(),
                    delta,
                });
            }
        }
    }
    // convergents of √Δ through the (P, Q) recurrence
    let d = BigInt::from(delta);
    let a0 = BigInt::from(root);
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let (mut pp, mut qq) = (BigInt::zero(), BigInt::one());
    let mut a = a0.clone();
    for _ in 0..10_000_000u64 {
        let norm = &p * &p - &d * &q * &q;
        if norm == BigInt::one() {
            return Ok(PellSolution {
                t: BigInt::from(2) * &p,
                s: BigInt::from(2) * &q,
                delta,
            });
        }
        if norm == BigInt::from(4) {
            return Ok(PellSolution { t: p, s: q, delta });
        }
        pp = &a * &qq - &pp;
        qq = (&d - &pp * &pp) / &qq;
        a = (&a0 + &pp) / &qq;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Err(Error::NonConvergence(format!(
        "no Pell solution found for Δ = {delta}"
    )))
}

/// Whether `t² − Δ s² = 4` has a solution with `s ≥ 1`, returning `s`.
pub fn pell_s_for_trace(t: u64, delta: u64) -> Option<u64> {
    if t <= 2 || delta == 0 {
        return None;
    }
    let n = (t as u128) * (t as u128) - 4;
    if !n.is_multiple_of(delta as u128) {
        return None;
    }
    let m = n / delta as u128;
    let s = m.sqrt();
    (s * s == m).then(|| s.to_u64()).flatten()
}
