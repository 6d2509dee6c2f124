//! Simple continued fractions: finite expansions of rationals and eventually
//! periodic expansions of quadratic irrationals.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::mat2::BigMat2;
use super::quadratic::{attracting_fixed_point, QuadraticIrrational};
use crate::error::{Error, Result};

const MAX_STEPS: usize = 10_000_000;

/// `[a₀; a₁, a₂, …]` written as a preperiod followed by a repeating period.
///
/// `a₀` may be any integer; every later term is at least 1. An empty period
/// means the expansion is finite. Construct through [`ContinuedFraction::new`]
/// so the representation is canonical and two equal values compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContinuedFraction {
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl ContinuedFraction {
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Result<Self> {
        let mut all = preperiod.iter().chain(period.iter());
        if preperiod.is_empty() {
            if period.iter().any(|&a| a < 1) {
                return Err(Error::invalid("periodic partial quotients must be ≥ 1"));
            }
        } else {
            all.next();
            if all.any(|&a| a < 1) {
                return Err(Error::invalid(
                    "partial quotients after the first must be ≥ 1",
                ));
            }
        }
        if preperiod.is_empty() && period.is_empty() {
            return Err(Error::invalid("empty continued fraction"));
        }
        let mut cf = ContinuedFraction { preperiod, period };
        cf.canonicalize();
        Ok(cf)
    }

    pub fn finite(terms: Vec<i64>) -> Result<Self> {
        Self::new(terms, Vec::new())
    }

    pub fn purely_periodic(period: Vec<i64>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    fn canonicalize(&mut self) {
        if self.period.is_empty() {
            // [.., a, 1] == [.., a + 1]
            let n = self.preperiod.len();
            if n > 1 && self.preperiod[n - 1] == 1 {
                self.preperiod.pop();
                *self.preperiod.last_mut().expect("length > 1") += 1;
            }
            return;
        }
        self.period = minimal_period(&self.period);
        // roll trailing preperiod terms into the period
        while let Some(&last) = self.preperiod.last() {
            if last == *self.period.last().expect("nonempty period") {
                self.preperiod.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty() && !self.period.is_empty()
    }

    /// Product of generators `(a 1; 1 0)` over the given terms.
    pub fn word_matrix(terms: &[i64]) -> BigMat2 {
        terms.iter().fold(BigMat2::identity(), |m, &a| {
            m.mul_generator(BigInt::from(a))
        })
    }

    /// Exact value of a finite expansion.
    pub fn value_rational(&self) -> Result<BigRational> {
        if !self.is_finite() {
            return Err(Error::invalid("expansion is periodic, value is irrational"));
        }
        let m = Self::word_matrix(&self.preperiod);
        // [a0; …, an] = p_n / q_n, the first column of the product
        Ok(BigRational::new(m.a, m.c))
    }

    /// Exact value of a periodic expansion, recovered from the fixed point of
    /// the period word and pushed through the preperiod.
    pub fn value_quadratic(&self) -> Result<QuadraticIrrational> {
        if self.is_finite() {
            return Err(Error::invalid("expansion is finite, value is rational"));
        }
        let tail = attracting_fixed_point(&Self::word_matrix(&self.period))?;
        if self.preperiod.is_empty() {
            Ok(tail)
        } else {
            tail.mobius(&Self::word_matrix(&self.preperiod))
        }
    }

    /// Floating-point value (finite expansions or via the exact surd).
    pub fn to_f64(&self) -> Result<f64> {
        if self.is_finite() {
            let v = self.value_rational()?;
            Ok(v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN))
        } else {
            Ok(self.value_quadratic()?.to_f64())
        }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        if self.period.is_empty() {
            write!(f, "[{}]", join(&self.preperiod))
        } else if self.preperiod.is_empty() {
            write!(f, "[({})]", join(&self.period))
        } else {
            write!(f, "[{}, ({})]", join(&self.preperiod), join(&self.period))
        }
    }
}

/// Shortest block whose repetition gives `period`.
fn minimal_period(period: &[i64]) -> Vec<i64> {
    let n = period.len();
    (1..=n)
        .filter(|len| n.is_multiple_of(*len))
        .find(|&len| (len..n).all(|i| period[i] == period[i - len]))
        .map(|len| period[..len].to_vec())
        .unwrap_or_else(|| period.to_vec())
}

fn term_i64(a: &BigInt) -> Result<i64> {
    a.to_i64().ok_or_else(|| Error::OutOfScale {
        value: a.to_string(),
    })
}

/// Euclidean expansion of `numerator / denominator`.
pub fn cf_expand_rational(
    numerator: impl Into<BigInt>,
    denominator: impl Into<BigInt>,
) -> Result<ContinuedFraction> {
    let (mut n, mut d) = (numerator.into(), denominator.into());
    if !d.is_positive() {
        return Err(Error::invalid(format!("denominator {d} must be ≥ 1")));
    }
    if !n.gcd(&d).is_one() {
        return Err(Error::invalid(format!("{n}/{d} is not in lowest terms")));
    }
    let mut terms = Vec::new();
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        terms.push(term_i64(&a)?);
        n = d;
        d = r;
    }
    ContinuedFraction::finite(terms)
}

/// Expansion of a quadratic irrational via the `(P, Q)` recurrence on
/// complete quotients `(P + √d)/Q`, with the period found by state repetition.
pub fn cf_expand_quadratic(x: &QuadraticIrrational) -> Result<ContinuedFraction> {
    // write x = (P + √d)/Q with Q | d − P²
    let sign = if x.q().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut p = x.p() * &sign;
    let mut q = x.r() * &sign;
    let mut d = x.q() * x.q() * x.radicand();
    if !((&d - &p * &p) % &q).is_zero() {
        let scale = q.abs();
        p *= &scale;
        d *= &scale * &scale;
        q *= &scale;
    }
    let sd = d.sqrt();

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms = Vec::new();
    for step in 0..MAX_STEPS {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = terms.split_off(start);
            let cf = ContinuedFraction::new(terms, period)?;
            debug_assert_eq!(
                cf.is_purely_periodic(),
                galois_reduced(x),
                "Galois criterion"
            );
            return Ok(cf);
        }
        seen.insert((p.clone(), q.clone()), step);
        let a = if q.is_positive() {
            (&p + &sd).div_floor(&q)
        } else {
            (&p + &sd + BigInt::one()).div_floor(&q)
        };
        terms.push(term_i64(&a)?);
        let p_next = &a * &q - &p;
        let q_next = (&d - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
    }
    Err(Error::NonConvergence(format!(
        "no period found within {MAX_STEPS} terms"
    )))
}

/// `x > 1` and `−1 < x̄ < 0`.
pub fn galois_reduced(x: &QuadraticIrrational) -> bool {
    let one = BigInt::one();
    let conj = x.conjugate();
    x.cmp_int(&one).is_gt() && conj.cmp_int(&-one).is_gt() && conj.cmp_int(&BigInt::zero()).is_lt()
}

/// Convergents `p_k/q_k` of a finite or periodic expansion, first `count`.
pub fn convergents(cf: &ContinuedFraction, count: usize) -> Vec<(BigInt, BigInt)> {
    let terms = cf
        .preperiod()
        .iter()
        .chain(cf.period().iter().cycle())
        .take(count);
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(count);
    for &a in terms {
        let a = BigInt::from(a);
        let p = &a * &p0 + &p1;
        let q = &a * &q0 + &q1;
        p1 = std::mem::replace(&mut p0, p.clone());
        q1 = std::mem::replace(&mut q0, q.clone());
        out.push((p, q));
    }
    out
}
