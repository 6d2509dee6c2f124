//! Real quadratic irrationals `(p + q√D)/r` with exact arithmetic.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor;
use super::mat2::BigMat2;
use crate::error::{Error, Result};

/// `(p + q√D)/r` in canonical form: `r > 0`, `D > 1` square-free,
/// `q ≠ 0` and `gcd(p, q, r) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

fn sqrt_floor(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Split `n > 0` into `(s, k)` with `n = s·k²` and `s` square-free.
fn split_square(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if let Some(small) = n.to_u64() {
        let (s, k) = factor::squarefree_part(small)?;
        return Ok((s.into(), k.into()));
    }
    let mut s = BigInt::one();
    let mut k = BigInt::one();
    let mut m = n.clone();
    for p in factor::primes_below(1_000_000) {
        let p = BigInt::from(p);
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= &p;
            }
        }
    }
    let r = sqrt_floor(&m);
    if &r * &r == m {
        return Ok((s, k * r));
    }
    match m.to_u64() {
        Some(rest) => {
            let (s2, k2) = factor::squarefree_part(rest)?;
            Ok((s * s2, k * k2))
        }
        None => Err(Error::OutOfScale {
            value: n.to_string(),
        }),
    }
}

impl QuadraticIrrational {
    /// Builds and canonicalizes `(p + q√D)/r`. Rejects `r = 0`, `D ≤ 0`,
    /// perfect-square `D` and `q = 0` (all rational).
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, mut q, r, d) = (p.into(), q.into(), r.into(), d.into());
        if r.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        if !d.is_positive() {
            return Err(Error::invalid(format!("radicand {d} must be positive")));
        }
        let (s, k) = split_square(&d)?;
        if s.is_one() {
            return Err(Error::PerfectSquare(d.to_string()));
        }
        if q.is_zero() {
            return Err(Error::invalid("q = 0 gives a rational number"));
        }
        q *= k;
        Self::with_squarefree(p, q, r, s)
    }

    /// Canonicalizes with a radicand already known to be square-free.
    fn with_squarefree(mut p: BigInt, mut q: BigInt, mut r: BigInt, d: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        if q.is_zero() {
            return Err(Error::invalid("q = 0 gives a rational number"));
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        Ok(QuadraticIrrational {
            p: p / &g,
            q: q / &g,
            r: r / &g,
            d,
        })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    /// The square-free radicand.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn conjugate(&self) -> Self {
        QuadraticIrrational {
            p: self.p.clone(),
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    /// Floating-point value. Evaluated as `(p ± √(q²D))/r` in a form that
    /// avoids cancellation when `p` and `q` have opposite signs.
    pub fn to_f64(&self) -> f64 {
        let qd = (&self.q * &self.q * &self.d)
            .to_f64()
            .unwrap_or(f64::INFINITY)
            .sqrt();
        let root = if self.q.is_negative() { -qd } else { qd };
        let p = self.p.to_f64().unwrap_or(f64::INFINITY);
        let r = self.r.to_f64().unwrap_or(f64::INFINITY);
        if p.signum() * root.signum() < 0.0 {
            // (p + root) = (p² − root²)/(p − root)
            let num = &self.p * &self.p - &self.q * &self.q * &self.d;
            num.to_f64().unwrap_or(f64::NAN) / ((p - root) * r)
        } else {
            (p + root) / r
        }
    }

    /// Exact comparison against an integer: sign of `self − n`.
    pub fn cmp_int(&self, n: &BigInt) -> std::cmp::Ordering {
        // sign of (p − n r) + q√D
        let u = &self.p - n * &self.r;
        sign_of_sum(&u, &self.q, &self.d)
    }

    /// `floor(self)`, exact.
    pub fn floor(&self) -> BigInt {
        // floor((p + q√D)/r) = floor((p + sgn(q)·√(q²D))/r)
        let qd = &self.q * &self.q * &self.d;
        let s = sqrt_floor(&qd);
        let num = if self.q.is_positive() {
            &self.p + &s
        } else {
            &self.p - &s - 1
        };
        num.div_floor(&self.r)
    }

    /// Image under the fractional-linear map `x ↦ (m.a x + m.b)/(m.c x + m.d)`.
    pub fn mobius(&self, m: &BigMat2) -> Result<Self> {
        // numerator  (m.a p + m.b r) + m.a q √D
        // denominator (m.c p + m.d r) + m.c q √D
        let (n0, n1) = (&m.a * &self.p + &m.b * &self.r, &m.a * &self.q);
        let (d0, d1) = (&m.c * &self.p + &m.d * &self.r, &m.c * &self.q);
        // multiply through by the conjugate of the denominator
        let den = &d0 * &d0 - &d1 * &d1 * &self.d;
        if den.is_zero() {
            return Err(Error::invalid("pole of the fractional-linear map"));
        }
        let p = &n0 * &d0 - &n1 * &d1 * &self.d;
        let q = &n1 * &d0 - &n0 * &d1;
        if q.is_zero() {
            return Err(Error::invalid("image is rational"));
        }
        QuadraticIrrational::with_squarefree(p, q, den, self.d.clone())
    }

    /// `1/self`.
    pub fn recip(&self) -> Result<Self> {
        let m = BigMat2::new(BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
        self.mobius(&m)
    }

    /// Whether `x` is fixed by `m` under the fractional-linear action,
    /// checked via `c x² + (d − a) x − b = 0` in `ℚ(√D)`.
    pub fn is_fixed_by(&self, m: &BigMat2) -> bool {
        // x = (p + q√D)/r ; x² = (p² + q²D + 2pq√D)/r²
        let (p, q, r, d) = (&self.p, &self.q, &self.r, &self.d);
        let x2_0 = p * p + q * q * d;
        let x2_1 = BigInt::from(2) * p * q;
        // multiply the equation by r²
        let rat = &m.c * &x2_0 + (&m.d - &m.a) * p * r - &m.b * r * r;
        let irr = &m.c * &x2_1 + (&m.d - &m.a) * q * r;
        rat.is_zero() && irr.is_zero()
    }
}

/// Sign of `u + v√D` for square-free `D > 1`.
fn sign_of_sum(u: &BigInt, v: &BigInt, d: &BigInt) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    match (u.sign(), v.sign()) {
        (Sign::NoSign, _) => sign_to_ord(v.sign()),
        (_, Sign::NoSign) => sign_to_ord(u.sign()),
        (a, b) if a == b => sign_to_ord(a),
        _ => {
            // opposite signs: compare u² with v²D
            let lhs = u * u;
            let rhs = v * v * d;
            match lhs.cmp(&rhs) {
                Greater => sign_to_ord(u.sign()),
                Less => sign_to_ord(v.sign()),
                Equal => Equal,
            }
        }
    }
}

fn sign_to_ord(s: Sign) -> std::cmp::Ordering {
    match s {
        Sign::Minus => std::cmp::Ordering::Less,
        Sign::NoSign => std::cmp::Ordering::Equal,
        Sign::Plus => std::cmp::Ordering::Greater,
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√{})/{}", self.p, self.q, self.d, self.r)
    }
}

/// The two fixed points of `M` are the roots of `c x² + (d − a) x − b = 0`.
/// Returns the attracting one, `(a − d + sgn(tr)·√(tr² − 4 det)) / 2c`.
pub fn attracting_fixed_point(m: &BigMat2) -> Result<QuadraticIrrational> {
    if m.c.is_zero() {
        return Err(Error::invalid("c = 0: a fixed point is at infinity"));
    }
    let t = m.trace();
    let disc = &t * &t - BigInt::from(4) * m.det();
    if !disc.is_positive() {
        return Err(Error::invalid(format!("matrix {m} is not hyperbolic")));
    }
    let sign = if t.is_negative() { -1 } else { 1 };
    QuadraticIrrational::new(
        &m.a - &m.d,
        BigInt::from(sign),
        BigInt::from(2) * &m.c,
        disc,
    )
}
