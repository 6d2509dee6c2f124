//! Desk-scale factorization: trial division up to 10⁷ plus a deterministic
//! Miller–Rabin test for 64-bit cofactors.

use crate::error::{Error, Result};

pub const TRIAL_LIMIT: u64 = 10_000_000;

/// Integer square root of a `u64`.
pub fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

pub fn is_perfect_square_u128(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality for all `u64` (Miller–Rabin with the first twelve
/// prime bases).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
///
/// A cofactor left after trial division to 10⁷ is below 10²¹, so it is a
/// prime, the square of a prime, or a product of two distinct primes. The
/// last case is reported as a single entry whose "prime" is the product; its
/// exponent is then 1 and `omega` accounts for two factors. Use
/// [`Factorization`] rather than reading the pairs when that matters.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    let mut m = n;
    let mut parts = Vec::new();
    let mut push = |m: &mut u64, p: u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            parts.push(Part {
                base: p,
                exp: e,
                prime: true,
            });
        }
    };
    push(&mut m, 2);
    push(&mut m, 3);
    let mut p = 5u64;
    let mut step = 2u64;
    while p <= TRIAL_LIMIT && p.saturating_mul(p) <= m {
        push(&mut m, p);
        p += step;
        step = 6 - step;
    }
    if m > 1 {
        if p.saturating_mul(p) > m || is_prime(m) {
            parts.push(Part {
                base: m,
                exp: 1,
                prime: true,
            });
        } else if let Some(r) = is_perfect_square_u128(m as u128) {
            parts.push(Part {
                base: r as u64,
                exp: 2,
                prime: true,
            });
        } else {
            // two distinct primes above the trial limit
            parts.push(Part {
                base: m,
                exp: 1,
                prime: false,
            });
        }
    }
    Ok(Factorization { n, parts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Part {
    base: u64,
    exp: u32,
    prime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    parts: Vec<Part>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.n
    }

    /// Number of prime factors counted with multiplicity, Ω(n).
    pub fn omega(&self) -> u32 {
        self.parts
            .iter()
            .map(|p| if p.prime { p.exp } else { 2 })
            .sum()
    }

    /// Number of distinct prime factors, ν(n).
    pub fn distinct(&self) -> u32 {
        self.parts.iter().map(|p| if p.prime { 1 } else { 2 }).sum()
    }

    /// `(sqf, root)` with `n = sqf · root²` and `sqf` square-free.
    pub fn squarefree_part(&self) -> (u64, u64) {
        let mut sqf = 1u64;
        let mut root = 1u64;
        for p in &self.parts {
            root *= p.base.pow(p.exp / 2);
            if p.exp % 2 == 1 {
                sqf *= p.base;
            }
        }
        (sqf, root)
    }

    pub fn is_square_free(&self) -> bool {
        self.parts.iter().all(|p| p.exp == 1)
    }

    /// Primes dividing `n`, when all of them are known individually.
    pub fn primes(&self) -> Option<Vec<u64>> {
        self.parts
            .iter()
            .map(|p| p.prime.then_some(p.base))
            .collect()
    }
}

/// `n = sqf · root²` with `sqf` square-free.
pub fn squarefree_part(n: u64) -> Result<(u64, u64)> {
    Ok(factorize(n)?.squarefree_part())
}

/// Ω(n), the number of prime factors with multiplicity.
pub fn almost_prime_class(n: u64) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

pub fn is_almost_prime(n: u64, r: u32) -> Result<bool> {
    Ok(almost_prime_class(n)? <= r)
}

/// Discriminant of `ℚ(√n)`: the square-free part, times 4 unless it is 1 mod 4.
pub fn fundamental_discriminant(n: u64) -> Result<u64> {
    let (sqf, _) = squarefree_part(n)?;
    Ok(if sqf % 4 == 1 { sqf } else { 4 * sqf })
}

/// Small-number square-freeness without the full factorization machinery.
pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Distinct primes dividing a small `n`.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function for small arguments.
pub fn mobius(n: u64) -> i64 {
    if !is_square_free(n) {
        return 0;
    }
    if prime_divisors(n).len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Primes below `limit` by the sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Square-free integers in `[lo, hi)`.
pub fn square_free_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(1)..hi).filter(|&q| is_square_free(q))
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Ramanujan sum `c_q(n) = Σ_{d | (q,n)} μ(q/d) d`, exact.
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    let g = gcd_u64(q, n.unsigned_abs());
    divisors(g)
        .into_iter()
        .map(|d| mobius(q / d) * d as i64)
        .sum()
}
