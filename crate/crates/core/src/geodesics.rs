//! Closed geodesics on the modular surface: fixed points, heights,
//! discriminants of trace sets, Pell traces and almost-prime counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::{factorize, fundamental_discriminant, isqrt_u64};
use crate::arith::pell::pell_s_for_trace;
use crate::arith::{
    attracting_fixed_point, cf_expand_quadratic, BigMat2, ContinuedFraction, Mat2,
    QuadraticIrrational,
};
use crate::error::{Error, Result};
use crate::semigroup::{trace_multiplicities, Alphabet, Ball};

/// Witnesses kept per trace in a Pell search.
pub const MAX_WITNESSES: usize = 16;

/// Attracting fixed point of a hyperbolic `M ∈ SL₂(ℤ)`.
pub fn fixed_point(m: &BigMat2) -> Result<QuadraticIrrational> {
    if m.det() != BigInt::from(1) {
        return Err(Error::invalid(format!("det {m} ≠ 1")));
    }
    if m.trace().abs() <= BigInt::from(2) {
        return Err(Error::invalid(format!("{m} is not hyperbolic: |tr| ≤ 2")));
    }
    attracting_fixed_point(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedGeodesic {
    pub matrix: BigMat2,
    pub trace: BigInt,
    /// `tr(M)² − 4`.
    pub discriminant: BigInt,
    /// Square-free part of the discriminant and the matching square root.
    pub sqf: u64,
    pub square_root: u64,
    pub fundamental_discriminant: u64,
    pub fixed_point: QuadraticIrrational,
    pub expansion: ContinuedFraction,
    pub height: f64,
}

impl ClosedGeodesic {
    pub fn new(m: BigMat2) -> Result<Self> {
        let fixed_point = fixed_point(&m)?;
        let trace = m.trace();
        let discriminant = &trace * &trace - BigInt::from(4);
        let d = discriminant.to_u64().ok_or_else(|| Error::OutOfScale {
            value: discriminant.to_string(),
        })?;
        let (sqf, square_root) = factorize(d)?.squarefree_part();
        let fundamental_discriminant = fundamental_discriminant(d)?;
        let expansion = cf_expand_quadratic(&fixed_point)?;
        let height = geodesic_height(expansion.period())?;
        Ok(ClosedGeodesic {
            matrix: m,
            trace,
            discriminant,
            sqf,
            square_root,
            fundamental_discriminant,
            fixed_point,
            expansion,
            height,
        })
    }
}

/// Value of the purely periodic expansion `[a₀; a₁, …]` with the given period:
/// the root above 1 of `qx² + (q′ − p)x − p′ = 0`, where `(p p′; q q′)` is the
/// period word. The discriminant is exact; only the final root is rounded,
/// from whichever form avoids cancellation.
fn periodic_value(period: &[i64]) -> f64 {
    let w = ContinuedFraction::word_matrix(period);
    let u = &w.a - &w.d;
    let disc = &u * &u + BigInt::from(4) * &w.b * &w.c;
    let root = disc.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let u = u.to_f64().unwrap_or(f64::NAN);
    if u >= 0.0 {
        (u + root) / (2.0 * w.c.to_f64().unwrap_or(f64::NAN))
    } else {
        2.0 * w.b.to_f64().unwrap_or(f64::NAN) / (root - u)
    }
}

/// `max_i (αᵢ + βᵢ)/2` with `αᵢ = [aᵢ; aᵢ₊₁, …]` and `βᵢ = [0; aᵢ₋₁, aᵢ₋₂, …]`,
/// the apex height of the reduced semicircle from `−βᵢ` to `αᵢ`.
pub fn geodesic_height(period: &[i64]) -> Result<f64> {
    if period.is_empty() {
        return Err(Error::invalid("empty period"));
    }
    if period.iter().any(|&a| a < 1) {
        return Err(Error::invalid("partial quotients must be at least 1"));
    }
    let n = period.len();
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let forward: Vec<i64> = (0..n).map(|j| period[(i + j) % n]).collect();
        let backward: Vec<i64> = (1..=n).map(|j| period[(i + n - j) % n]).collect();
        let alpha = periodic_value(&forward);
        let beta = 1.0 / periodic_value(&backward);
        best = best.max(0.5 * (alpha + beta));
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantEntry {
    pub t: u64,
    /// `t² − 4`.
    pub d: u64,
    pub sqf: u64,
    pub fundamental: u64,
    /// Prime factors of `t` with multiplicity.
    pub omega: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantSet {
    pub norm_bound: f64,
    pub entries: Vec<DiscriminantEntry>,
    /// How many distinct traces give each square-free part.
    pub multiplicity: BTreeMap<u64, u64>,
    /// Whether trace 2, whose discriminant is 0, was present and left out.
    pub skipped_parabolic: bool,
}

impl DiscriminantSet {
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.multiplicity.keys().copied()
    }
}

/// `{sqf(t² − 4)}` over the distinct traces `t > 2` of the ball of radius `N`.
pub fn discriminant_set(alphabet: &Alphabet, n: f64) -> Result<DiscriminantSet> {
    let stats = trace_multiplicities(alphabet, n)?;
    let traces: Vec<u64> = stats.traces().collect();
    let entries = traces
        .par_iter()
        .filter(|&&t| t > 2)
        .map(|&t| {
            let d = t * t - 4;
            let (sqf, _) = factorize(d)?.squarefree_part();
            Ok(DiscriminantEntry {
                t,
                d,
                sqf,
                fundamental: fundamental_discriminant(d)?,
                omega: factorize(t)?.omega(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut multiplicity = BTreeMap::new();
    for e in &entries {
        *multiplicity.entry(e.sqf).or_insert(0) += 1;
    }
    Ok(DiscriminantSet {
        norm_bound: n,
        entries,
        multiplicity,
        skipped_parabolic: traces.contains(&2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PellTrace {
    pub t: u64,
    pub s: u64,
    /// Number of ball elements with this trace.
    pub multiplicity: u64,
    /// The first few of them, in enumeration order.
    pub witnesses: Vec<Mat2<i64>>,
}

/// Traces `t` of the ball with `t² − Δs² = 4` for some `s ≥ 1`.
pub fn pell_trace_search(alphabet: &Alphabet, delta: u64, n: f64) -> Result<Vec<PellTrace>> {
    if delta == 0 {
        return Err(Error::invalid("Δ must be positive"));
    }
    let r = isqrt_u64(delta);
    if r * r == delta {
        return Err(Error::PerfectSquare(delta.to_string()));
    }
    let mut hits: BTreeMap<u64, PellTrace> = BTreeMap::new();
    Ball::new(alphabet, n)?.for_each(|m, _| {
        let t = m.trace();
        if t <= 2 {
            return;
        }
        let t = t as u64;
        if let Some(s) = pell_s_for_trace(t, delta) {
            let e = hits.entry(t).or_insert(PellTrace {
                t,
                s,
                multiplicity: 0,
                witnesses: Vec::new(),
            });
            e.multiplicity += 1;
            if e.witnesses.len() < MAX_WITNESSES {
                e.witnesses.push(*m);
            }
        }
    })?;
    Ok(hits.into_values().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostPrimeCensus {
    pub r: u32,
    pub total: u64,
    pub count: u64,
    pub ratio: f64,
}

/// How many of `values` have at most `R` prime factors with multiplicity.
pub fn almost_prime_census(values: &[u64], r: u32) -> Result<AlmostPrimeCensus> {
    let count = values
        .par_iter()
        .map(|&v| Ok(u64::from(factorize(v)?.omega() <= r)))
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    let total = values.len() as u64;
    let ratio = if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    };
    Ok(AlmostPrimeCensus {
        r,
        total,
        count,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(a: i64, b: i64, c: i64, d: i64) -> BigMat2 {
        Mat2::new(a, b, c, d).to_big()
    }

    #[test]
    fn fixed_points() {
        let x = fixed_point(&big(2, 1, 1, 1)).unwrap();
        assert_eq!(x, QuadraticIrrational::new(1, 1, 2, 5).unwrap());
        assert!(fixed_point(&big(1, 1, 0, 1)).is_err());
        assert!(fixed_point(&big(0, -1, 1, 0)).is_err());
        assert!(fixed_point(&big(2, 1, 1, 2)).is_err());
    }

    #[test]
    fn golden_height() {
        let h = geodesic_height(&[1]).unwrap();
        assert!((h - 5f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(geodesic_height(&[]).is_err());
        assert!(geodesic_height(&[1, 0]).is_err());
    }

    #[test]
    fn height_is_rotation_invariant() {
        let p = [2i64, 2, 4, 2, 1, 3, 2, 62, 2, 5];
        let h = geodesic_height(&p).unwrap();
        for k in 1..p.len() {
            let mut q = p.to_vec();
            q.rotate_left(k);
            assert!((geodesic_height(&q).unwrap() - h).abs() < 1e-9);
        }
    }

    #[test]
    fn small_discriminants() {
        let set = discriminant_set(&Alphabet::new([1]).unwrap(), 100.0).unwrap();
        let ts: Vec<u64> = set.entries.iter().map(|e| e.t).collect();
        assert_eq!(ts, vec![3, 7, 18, 47]);
        assert!(set.entries.iter().all(|e| e.sqf == 5));
        assert_eq!(set.multiplicity.get(&5), Some(&4));
        assert!(set.skipped_parabolic);

        let set = discriminant_set(&Alphabet::new([1, 2]).unwrap(), 10.0).unwrap();
        let get = |t| set.entries.iter().find(|e| e.t == t).map(|e| e.sqf);
        assert_eq!(get(3), Some(5));
        assert_eq!(get(4), Some(3));
    }

    #[test]
    fn pell_traces() {
        let one = Alphabet::new([1]).unwrap();
        let hits = pell_trace_search(&one, 5, 10.0).unwrap();
        assert_eq!(hits[0].t, 3);
        assert_eq!(hits[0].witnesses[0], Mat2::new(2, 1, 1, 1));
        assert!(pell_trace_search(&one, 3, 10.0).unwrap().is_empty());

        let hits = pell_trace_search(&Alphabet::new([1, 2]).unwrap(), 2, 10.0).unwrap();
        let six = hits.iter().find(|h| h.t == 6).unwrap();
        assert_eq!(six.s, 4);
        assert!(six.witnesses.contains(&Mat2::new(5, 2, 2, 1)));
        assert!(pell_trace_search(&one, 4, 10.0).is_err());
    }

    #[test]
    fn census() {
        assert_eq!(almost_prime_census(&[4], 1).unwrap().count, 0);
        let vals: Vec<u64> = (1..=1000u64).map(|n| n * n + 1).collect();
        assert!(almost_prime_census(&vals, 2).unwrap().count >= 100);
    }
}
