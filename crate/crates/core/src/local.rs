//! Local data at square-free moduli: `|SL₂(q)|`, the character χ₄, the
//! trace-zero densities β(q), the sieve densities ρ(p) and the linear-sieve
//! ratio.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::factor::{self, is_prime};
use crate::error::{Error, Result};

/// The non-principal character mod 4.
pub fn chi4(n: i64) -> i64 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

fn require_square_free(q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let f = factor::factorize(q)?;
    if !f.is_square_free() {
        return Err(Error::NotSquareFree { value: q });
    }
    f.primes().ok_or(Error::OutOfScale {
        value: q.to_string(),
    })
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `|SL₂(ℤ/q)| = q³ ∏_{p | q} (1 − p⁻²)` for square-free `q`.
pub fn sl2_size(q: u64) -> Result<u128> {
    let primes = require_square_free(q)?;
    Ok(primes
        .iter()
        .map(|&p| (p as u128) * ((p as u128) * (p as u128) - 1))
        .product())
}

fn beta_prime(p: u64) -> BigRational {
    let p = p as i64;
    // (1/p)(1 + χ₄(p)/p)(1 − 1/p²)⁻¹ = (p + χ₄(p)) / (p² − 1)
    ratio(p + chi4(p), p * p - 1)
}

/// Density of trace-zero elements in `SL₂(ℤ/q)`, multiplicative over `p | q`.
pub fn beta(q: u64) -> Result<BigRational> {
    let primes = require_square_free(q)?;
    Ok(primes
        .into_iter()
        .map(beta_prime)
        .fold(BigRational::one(), |acc, b| acc * b))
}

/// `ρ(p) = p(p + χ₄(p))/(p² − 1) − 1`.
pub fn rho(p: u64) -> Result<BigRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime { value: p });
    }
    let pi = p as i64;
    Ok(ratio(pi * (pi + chi4(pi)), pi * pi - 1) - BigRational::one())
}

pub const BRUTE_FORCE_MAX_PRIME: u64 = 31;

/// `#{γ ∈ SL₂(𝔽_p) : tr γ = 0}` by running over all `p⁴` matrices.
pub fn trace_zero_count_bruteforce(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime { value: p });
    }
    if p > BRUTE_FORCE_MAX_PRIME {
        return Err(Error::Budget {
            estimate: (p as f64).powi(4),
            cap: (BRUTE_FORCE_MAX_PRIME as f64).powi(4),
        });
    }
    let mut count = 0;
    for a in 0..p {
        for d in 0..p {
            if (a + d) % p != 0 {
                continue;
            }
            for b in 0..p {
                for c in 0..p {
                    if (a * d + p * p - b * c) % p == 1 % p {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// All of β, ρ and χ₄ at a square-free modulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalDensity {
    pub q: u64,
    pub primes: Vec<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub beta: BigRational,
    #[serde(serialize_with = "ser_ratios")]
    pub rho: Vec<BigRational>,
    pub chi4: Vec<i64>,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

fn ser_ratios<S: serde::Serializer>(
    r: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(format_ratio))
}

/// `num/den`, always with an explicit denominator.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn local_density(q: u64) -> Result<LocalDensity> {
    let primes = require_square_free(q)?;
    let rho = primes.iter().map(|&p| rho(p)).collect::<Result<Vec<_>>>()?;
    let chi4 = primes.iter().map(|&p| chi4(p as i64)).collect();
    Ok(LocalDensity {
        q,
        beta: beta(q)?,
        rho,
        chi4,
        primes,
    })
}

/// `∏_{w ≤ p < z} (1 − β(p))⁻¹ · log w / log z`.
pub fn sieve_condition_ratio(w: f64, z: f64) -> Result<f64> {
    if !(w >= 2.0 && z > w && z.is_finite()) {
        return Err(Error::invalid(format!(
            "need 2 ≤ w < z, got w = {w}, z = {z}"
        )));
    }
    let lo = w.ceil() as u64;
    let hi = z.ceil() as u64;
    let mut log_prod = 0.0;
    for p in factor::primes_below(hi) {
        if p < lo {
            continue;
        }
        let b = beta_prime(p).to_f64().unwrap_or(0.0);
        log_prod -= (1.0 - b).ln();
    }
    Ok(log_prod.exp() * w.ln() / z.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_bruteforce(q: u64) -> u128 {
        let mut n = 0;
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        if (a * d + q * q - b * c) % q == 1 % q {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn chi4_values() {
        assert_eq!((chi4(2), chi4(5), chi4(3), chi4(-1)), (0, 1, -1, -1));
    }

    #[test]
    fn group_orders() {
        assert_eq!(sl2_size(1).unwrap(), 1);
        assert_eq!(sl2_size(2).unwrap(), 6);
        assert_eq!(sl2_size(6).unwrap(), 144);
        for q in [2, 3, 5, 6, 10, 15] {
            assert_eq!(sl2_size(q).unwrap(), sl2_bruteforce(q), "q = {q}");
        }
        assert!(matches!(
            sl2_size(12),
            Err(Error::NotSquareFree { value: 12 })
        ));
    }

    #[test]
    fn beta_and_rho_examples() {
        assert_eq!(beta(1).unwrap(), BigRational::one());
        assert_eq!(beta(2).unwrap(), ratio(2, 3));
        assert_eq!(beta(3).unwrap(), ratio(1, 4));
        assert_eq!(beta(5).unwrap(), ratio(1, 4));
        assert_eq!(beta(15).unwrap(), ratio(1, 16));
        assert_eq!(rho(2).unwrap(), ratio(1, 3));
        assert_eq!(rho(3).unwrap(), ratio(-1, 4));
        assert_eq!(rho(5).unwrap(), ratio(1, 4));
        assert!(rho(9).is_err());
    }

    #[test]
    fn bruteforce_counts() {
        assert_eq!(trace_zero_count_bruteforce(2).unwrap(), 4);
        assert_eq!(trace_zero_count_bruteforce(3).unwrap(), 6);
        assert_eq!(trace_zero_count_bruteforce(5).unwrap(), 30);
        assert!(trace_zero_count_bruteforce(37).unwrap_err().is_budget());
    }

    #[test]
    fn multiplicativity() {
        let sf: Vec<u64> = factor::square_free_in(1, 101).collect();
        for &a in &sf {
            for &b in &sf {
                if factor::gcd_u64(a, b) == 1 {
                    assert_eq!(beta(a * b).unwrap(), beta(a).unwrap() * beta(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn rho_beta_identity() {
        for p in factor::primes_below(1001) {
            assert_eq!(
                rho(p).unwrap() + BigRational::one(),
                beta(p).unwrap() * BigInt::from(p)
            );
        }
    }

    #[test]
    fn sieve_ratio() {
        let r = sieve_condition_ratio(2.0, 3.0).unwrap();
        assert!((r - 3.0 * 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        let r = sieve_condition_ratio(4.0, 4.0 * (1.0 + 1e-9)).unwrap();
        assert!((r - 1.0).abs() < 1e-6);
        for z in [10.0, 100.0, 1e3, 1e4, 1e5] {
            let r = sieve_condition_ratio(2.0, z).unwrap();
            assert!(r > 0.0 && r <= 3.0, "z = {z}: {r}");
        }
    }
}
