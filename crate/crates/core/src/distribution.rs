//! Distribution of traces in progressions: remainders `r_q(N)`, level
//! sweeps, the equidistributed set ℵ, the sequence `a_N`, its main-term
//! decomposition and the error sums `ℰ₁(Q; 𝔞)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::{divisors, gcd_u64, is_square_free, ramanujan_sum, square_free_in};
use crate::arith::Mat2;
use crate::error::{Error, Result};
use crate::local::{beta, sl2_size};
use crate::semigroup::{enumerate_ball, trace_multiplicities, Alphabet, TraceStats};

/// Default cap on `|Ξ|·|ℵ|·|Ω|` and similar triple products.
pub const DEFAULT_TRIPLE_CAP: f64 = 2e9;

fn require_square_free(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    if !is_square_free(q) {
        return Err(Error::NotSquareFree { value: q });
    }
    Ok(())
}

/// `r_q(N) = #{‖γ‖ < N : q | tr γ} − (1/q)·#{‖γ‖ < N}`.
pub fn remainder_rq(stats: &TraceStats, q: u64) -> Result<f64> {
    require_square_free(q)?;
    Ok(stats.count_divisible(q) as f64 - stats.total as f64 / q as f64)
}

/// The remainder against the local density instead of `1/q`:
/// `#{q | tr γ} − β(q)·#{‖γ‖ < N}`.
pub fn remainder_rq_beta(stats: &TraceStats, q: u64) -> Result<f64> {
    let b = beta(q)?.to_f64().unwrap_or(f64::NAN);
    Ok(stats.count_divisible(q) as f64 - stats.total as f64 * b)
}

/// Counts of traces in each residue class mod `q`, with multiplicity.
pub fn trace_residue_counts(stats: &TraceStats, q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let mut out = vec![0u64; q as usize];
    for (&t, &c) in &stats.multiplicities {
        out[(t % q) as usize] += c;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow {
    pub alpha: f64,
    /// `N^α`; moduli run over square-free `q < Q`.
    pub q_bound: f64,
    pub sum_abs_r: f64,
    pub total: u64,
    pub ratio: f64,
    /// Same ratio with remainders taken against `β(q)`.
    pub ratio_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub bound: f64,
    pub alphabet: Alphabet,
    pub total: u64,
    /// `(q, r_q(N))` for every square-free `q` below the largest `N^α`.
    pub remainders: Vec<(u64, f64)>,
    pub rows: Vec<LevelRow>,
}

/// `Σ_{q < N^α, q square-free} |r_q(N)| / #{‖γ‖ < N}` for each `α`.
pub fn level_sweep(alphabet: &Alphabet, bound: f64, alphas: &[f64]) -> Result<DistributionReport> {
    let stats = trace_multiplicities(alphabet, bound)?;
    level_sweep_from_stats(alphabet, &stats, alphas)
}

pub fn level_sweep_from_stats(
    alphabet: &Alphabet,
    stats: &TraceStats,
    alphas: &[f64],
) -> Result<DistributionReport> {
    if alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
        return Err(Error::invalid("exponents α must lie in (0, 1)"));
    }
    if stats.total == 0 {
        return Err(Error::invalid("the ball is empty"));
    }
    let bound = stats.norm_bound;
    let q_top = alphas.iter().fold(0.0f64, |m, a| m.max(bound.powf(*a)));
    let moduli: Vec<u64> = square_free_in(1, q_top.ceil() as u64 + 1)
        .filter(|&q| (q as f64) < q_top)
        .collect();
    let remainders = moduli
        .iter()
        .map(|&q| Ok((q, remainder_rq(stats, q)?)))
        .collect::<Result<Vec<_>>>()?;
    let beta_rem = moduli
        .iter()
        .map(|&q| remainder_rq_beta(stats, q))
        .collect::<Result<Vec<_>>>()?;
    let total = stats.total;
    let rows = alphas
        .iter()
        .map(|&alpha| {
            let q_bound = bound.powf(alpha);
            let keep = |q: u64| (q as f64) < q_bound;
            let sum_abs_r: f64 = remainders
                .iter()
                .filter(|(q, _)| keep(*q))
                .map(|(_, r)| r.abs())
                .sum();
            let sum_beta: f64 = moduli
                .iter()
                .zip(&beta_rem)
                .filter(|(q, _)| keep(**q))
                .map(|(_, r)| r.abs())
                .sum();
            LevelRow {
                alpha,
                q_bound,
                sum_abs_r,
                total,
                ratio: sum_abs_r / total as f64,
                ratio_beta: sum_beta / total as f64,
            }
        })
        .collect();
    Ok(DistributionReport {
        bound,
        alphabet: alphabet.clone(),
        total,
        remainders,
        rows,
    })
}

/// Max over `𝔞₀ ∈ SL₂(q)` of `|#{s ∈ S : s ≡ 𝔞₀ (q)}/|S| − 1/|SL₂(q)||`.
///
/// Classes not hit by `S` contribute `1/|SL₂(q)|`, so only the occupied
/// classes need to be visited.
pub fn equidistribution_discrepancy(set: &[Mat2<i64>], q: u64) -> Result<f64> {
    require_square_free(q)?;
    if set.is_empty() {
        return Err(Error::invalid("empty set"));
    }
    let group = sl2_size(q)? as f64;
    let mut counts: HashMap<[u32; 4], u64> = HashMap::new();
    for m in set {
        *counts.entry(m.reduce(q)).or_default() += 1;
    }
    let n = set.len() as f64;
    let mut worst = counts
        .values()
        .map(|&c| (c as f64 / n - 1.0 / group).abs())
        .fold(0.0, f64::max);
    if (counts.len() as f64) < group {
        worst = worst.max(1.0 / group);
    }
    Ok(worst)
}

/// All elements of `SL₂(ℤ/q)`, in lexicographic order of `[a, b, c, d]`.
pub fn sl2_elements(q: u64) -> Result<Vec<[u32; 4]>> {
    if q == 0 || q > 64 {
        return Err(Error::invalid(format!(
            "listing SL₂(ℤ/{q}) is limited to 1 ≤ q ≤ 64"
        )));
    }
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a * d + q * q - b * c) % q == 1 % q {
                        out.push([a as u32, b as u32, c as u32, d as u32]);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlephSet {
    pub bound: f64,
    pub modulus: u64,
    /// `R = |SL₂(B)|`.
    pub group_order: u64,
    /// `T = (Y / max‖x_j‖)^{1/R}`.
    pub t: f64,
    /// The pigeonholed element `𝔰_T`.
    pub s_t: Mat2<i64>,
    /// `|𝒮(T)|` and `|𝒮′(T)|`.
    pub s_size: usize,
    pub s_prime_size: usize,
    /// Lifts `x_j ∈ Γ_{1,2}` of every class of `SL₂(B)`.
    pub representatives: Vec<Mat2<i64>>,
    pub elements: Vec<Mat2<i64>>,
}

impl AlephSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The trivial set `{I}`.
    pub fn identity() -> Self {
        AlephSet {
            bound: 2.0,
            modulus: 1,
            group_order: 1,
            t: 2.0,
            s_t: Mat2::identity(),
            s_size: 1,
            s_prime_size: 1,
            representatives: vec![Mat2::identity()],
            elements: vec![Mat2::identity()],
        }
    }

    pub fn discrepancy(&self, q: u64) -> Result<f64> {
        equidistribution_discrepancy(&self.elements, q)
    }
}

const REPRESENTATIVE_NORM_LIMIT: f64 = 1e4;

/// Smallest-norm lifts in Γ_{1,2} of every element of `SL₂(B)`.
fn class_representatives(modulus: u64) -> Result<Vec<Mat2<i64>>> {
    let classes = sl2_elements(modulus)?;
    let gamma0 = Alphabet::new([1, 2])?;
    let mut bound = 4.0;
    loop {
        let mut best: HashMap<[u32; 4], Mat2<i64>> = HashMap::new();
        for m in enumerate_ball(&gamma0, bound)? {
            best.entry(m.reduce(modulus))
                .and_modify(|b| {
                    if (m.norm_sq_wide(), m) < (b.norm_sq_wide(), *b) {
                        *b = m;
                    }
                })
                .or_insert(m);
        }
        let missing: Vec<_> = classes.iter().filter(|c| !best.contains_key(*c)).collect();
        if missing.is_empty() {
            return Ok(classes.iter().map(|c| best[c]).collect());
        }
        if bound >= REPRESENTATIVE_NORM_LIMIT {
            return Err(Error::Construction(format!(
                "no lift of norm below {REPRESENTATIVE_NORM_LIMIT} for classes {missing:?} mod {modulus}"
            )));
        }
        bound *= 2.0;
    }
}

/// Builds `ℵ = ⊔_j 𝒮′(T)·𝔰_T^{R−1}·x_j ⊂ Γ_{1,2}` with every element of norm
/// below `Y`.
///
/// `𝒮(T)` is the Γ_{1,2} ball of norm `T`, `𝔰_T` an element of its most
/// populated class mod `B` (first in enumeration order among ties), and
/// `𝒮′(T)` that class. Products are all `≡ x_j (mod B)`, and
/// submultiplicativity of the norm gives `‖·‖ < T^R·max‖x_j‖ = Y`.
pub fn construct_aleph(bound: f64, modulus: u64) -> Result<AlephSet> {
    require_square_free(modulus)?;
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::invalid(format!("bound {bound} must be positive")));
    }
    let r = sl2_size(modulus)? as u64;
    let representatives = class_representatives(modulus)?;
    let x_max = representatives.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let t = (bound / x_max).powf(1.0 / r as f64);
    if t <= std::f64::consts::SQRT_2 {
        return Err(Error::invalid(format!(
            "Y = {bound} too small for B = {modulus}: T = {t:.4} must exceed √2"
        )));
    }
    let gamma0 = Alphabet::new([1, 2])?;
    let ball = enumerate_ball(&gamma0, t)?;
    let mut by_class: BTreeMap<[u32; 4], Vec<Mat2<i64>>> = BTreeMap::new();
    let mut first_seen: HashMap<[u32; 4], usize> = HashMap::new();
    for (i, m) in ball.iter().enumerate() {
        let c = m.reduce(modulus);
        first_seen.entry(c).or_insert(i);
        by_class.entry(c).or_default().push(*m);
    }
    let (_, s_prime) = by_class
        .iter()
        .max_by(|(ca, a), (cb, b)| {
            a.len()
                .cmp(&b.len())
                .then(first_seen[*cb].cmp(&first_seen[*ca]))
        })
        .expect("ball contains the identity");
    let s_t = s_prime[0];
    let tail = s_t.pow(r as u32 - 1);
    let budget = (s_prime.len() * representatives.len()) as f64;
    if budget > crate::semigroup::DEFAULT_STORE_CAP {
        return Err(Error::Budget {
            estimate: budget,
            cap: crate::semigroup::DEFAULT_STORE_CAP,
        });
    }
    let limit = (bound * bound).ceil() as i128;
    let mut elements = Vec::with_capacity(budget as usize);
    for x in &representatives {
        let right = tail.checked_mul(x).ok_or(Error::Budget {
            estimate: bound,
            cap: crate::semigroup::MAX_NORM,
        })?;
        for s in s_prime {
            let e = s.checked_mul(&right).ok_or(Error::Budget {
                estimate: bound,
                cap: crate::semigroup::MAX_NORM,
            })?;
            debug_assert!(e.norm_sq_wide() < limit);
            elements.push(e);
        }
    }
    Ok(AlephSet {
        bound,
        modulus,
        group_order: r,
        t,
        s_t,
        s_size: ball.len(),
        s_prime_size: s_prime.len(),
        representatives,
        elements,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceA {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub xi: Vec<Mat2<i64>>,
    pub aleph: Vec<Mat2<i64>>,
    pub omega: Vec<Mat2<i64>>,
    /// `n ↦ a_N(n)` on its support.
    pub counts: BTreeMap<i64, u64>,
    /// `|𝔄| = Σ_n a_N(n)`.
    pub total: u64,
}

impl SequenceA {
    /// `|𝔄_𝔮| = Σ_{𝔮 | n} a_N(n)`.
    pub fn count_divisible(&self, q: u64) -> u64 {
        let q = q as i64;
        self.counts
            .iter()
            .filter(|(n, _)| *n % q == 0)
            .map(|(_, c)| c)
            .sum()
    }

    /// `Σ_{n ≡ j (q)} a_N(n)` for every `j mod q`.
    pub fn residue_counts(&self, q: u64) -> Vec<u64> {
        let mut out = vec![0u64; q as usize];
        for (&n, &c) in &self.counts {
            out[n.rem_euclid(q as i64) as usize] += c;
        }
        out
    }
}

/// `a_N(n) = #{(ξ, 𝔞, ω) ∈ Ξ × ℵ × Ω : tr(ξ𝔞ω) = n}` with `Ξ`, `Ω` the Γ_A
/// balls of norms `X` and `Z`.
pub fn build_sequence_an(
    alphabet: &Alphabet,
    x: f64,
    z: f64,
    aleph: &AlephSet,
) -> Result<SequenceA> {
    build_sequence_from_sets(
        x,
        aleph.bound,
        z,
        enumerate_ball(alphabet, x)?,
        aleph.elements.clone(),
        enumerate_ball(alphabet, z)?,
    )
}

pub fn build_sequence_from_sets(
    x: f64,
    y: f64,
    z: f64,
    xi: Vec<Mat2<i64>>,
    aleph: Vec<Mat2<i64>>,
    omega: Vec<Mat2<i64>>,
) -> Result<SequenceA> {
    let work = xi.len() as f64 * aleph.len() as f64 * omega.len() as f64;
    if work > DEFAULT_TRIPLE_CAP {
        return Err(Error::Budget {
            estimate: work,
            cap: DEFAULT_TRIPLE_CAP,
        });
    }
    let left: Vec<Mat2<i64>> = xi
        .iter()
        .flat_map(|a| aleph.iter().map(move |b| a.checked_mul(b)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::invalid("matrix entries overflow 64 bits"))?;
    let counts = left
        .par_iter()
        .fold(HashMap::<i64, u64>::new, |mut h, p| {
            for w in &omega {
                *h.entry(p.trace_of_product(w)).or_default() += 1;
            }
            h
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let counts: BTreeMap<i64, u64> = counts.into_iter().collect();
    let total = counts.values().sum();
    Ok(SequenceA {
        x,
        y,
        z,
        xi,
        aleph,
        omega,
        counts,
        total,
    })
}

/// Compensated complex summation.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    fn add(&mut self, v: Complex64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `e(x) = exp(2πix)` for `x = num/den`, reduced first so the angle is exact
/// up to rounding of a number in `[0, 1)`.
fn e_frac(num: i64, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i64) as f64 / den as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// `(1/𝔮) Σ_n Σ_{q | 𝔮, q ∈ range} Σ'_{r (q)} e_q(rn) a_N(n)`, summed with
/// explicit exponentials.
fn character_sum(seq: &SequenceA, frak_q: u64, keep: impl Fn(u64) -> bool) -> Complex64 {
    let residues = seq.residue_counts(frak_q);
    let mut acc = Kahan::default();
    for q in divisors(frak_q).into_iter().filter(|&q| keep(q)) {
        for (j, &count) in residues.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let mut inner = Kahan::default();
            for r in (0..q).filter(|&r| gcd_u64(r, q) == 1) {
                inner.add(e_frac(r as i64 * j as i64, q));
            }
            acc.add(inner.sum * count as f64);
        }
    }
    acc.sum / frak_q as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainTerm {
    pub frak_q: u64,
    pub q0: f64,
    /// `𝓜_𝔮`.
    pub main: f64,
    /// Imaginary part of the computed character sum; zero up to rounding.
    pub imag: f64,
    /// `|𝔄_𝔮|` by direct filtering.
    pub filtered: u64,
    /// `r(𝔮) = |𝔄_𝔮| − 𝓜_𝔮`.
    pub remainder: f64,
    /// `𝓜_𝔮` from exact Ramanujan sums, as `numerator / 𝔮`.
    pub main_exact_numerator: i128,
}

/// Splits `|𝔄_𝔮|` into the part from moduli `q | 𝔮` with `q < Q₀` and the
/// rest.
pub fn main_term_decomposition(seq: &SequenceA, frak_q: u64, q0: f64) -> Result<MainTerm> {
    require_square_free(frak_q)?;
    let keep = |q: u64| (q as f64) < q0;
    let value = character_sum(seq, frak_q, keep);
    let residues = seq.residue_counts(frak_q);
    let mut exact: i128 = 0;
    for q in divisors(frak_q).into_iter().filter(|&q| keep(q)) {
        for (j, &count) in residues.iter().enumerate() {
            exact += ramanujan_sum(q, j as i64) as i128 * count as i128;
        }
    }
    let filtered = seq.count_divisible(frak_q);
    Ok(MainTerm {
        frak_q,
        q0,
        main: value.re,
        imag: value.im,
        filtered,
        remainder: filtered as f64 - value.re,
        main_exact_numerator: exact,
    })
}

/// `|𝔄_𝔮|` through the full orthogonality relation, all `q | 𝔮` included.
pub fn orthogonality_count(seq: &SequenceA, frak_q: u64) -> Result<Complex64> {
    require_square_free(frak_q)?;
    Ok(character_sum(seq, frak_q, |_| true))
}

/// Ramanujan sums `c_q(n)` for one `q`, cached by `gcd(q, n)`.
struct RamanujanTable {
    q: u64,
    by_gcd: HashMap<u64, i64>,
}

impl RamanujanTable {
    fn new(q: u64) -> Self {
        let by_gcd = divisors(q)
            .into_iter()
            .map(|g| (g, ramanujan_sum(q, g as i64)))
            .collect();
        RamanujanTable { q, by_gcd }
    }

    fn get(&self, n: i64) -> i64 {
        self.by_gcd[&gcd_u64(self.q, n.unsigned_abs())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E1Report {
    pub q: f64,
    pub x: f64,
    pub z: f64,
    pub moduli: Vec<u64>,
    pub xi_size: usize,
    pub omega_size: usize,
    /// `ℰ₁(Q; 𝔞)`, an exact integer.
    pub e1: i128,
    pub value: f64,
    pub bound5: f64,
    pub bound6: f64,
    pub ratio5: f64,
    pub ratio6: f64,
}

/// Unconditional envelope
/// `Q |Ξ|^{1/2} |Ω| X [|Ω|^{-1/6} + Q X^{-1/4} + Q² X^{-1/2}]`.
pub fn e1_bound_unconditional(q: f64, xi: f64, omega: f64, x: f64) -> f64 {
    q * xi.sqrt() * omega * x * (omega.powf(-1.0 / 6.0) + q / x.powf(0.25) + q * q / x.sqrt())
}

/// Envelope under the energy conjecture
/// `Q |Ω|^{1/2} X² Z [Q^{1/2} Z^{-1/2} + Q^{-1/8}]`.
pub fn e1_bound_energy(q: f64, omega: f64, x: f64, z: f64) -> f64 {
    q * omega.sqrt() * x * x * z * ((q / z).sqrt() + q.powf(-0.125))
}

/// `ℰ₁(Q; 𝔞) = Σ_{q ∈ [Q, 2Q) sq.-free} Σ_{ξ ∈ Ξ} Σ_{ω ∈ Ω} c_q(tr(ξ𝔞ω))`.
pub fn error_sum_e1(
    alphabet: &Alphabet,
    q: f64,
    frak_a: &Mat2<i64>,
    x: f64,
    z: f64,
) -> Result<E1Report> {
    let xi = enumerate_ball(alphabet, x)?;
    let omega = enumerate_ball(alphabet, z)?;
    error_sum_e1_from_sets(q, frak_a, x, z, &xi, &omega)
}

pub fn error_sum_e1_from_sets(
    q: f64,
    frak_a: &Mat2<i64>,
    x: f64,
    z: f64,
    xi: &[Mat2<i64>],
    omega: &[Mat2<i64>],
) -> Result<E1Report> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::invalid(format!("Q = {q} must be at least 1")));
    }
    let work = xi.len() as f64 * omega.len() as f64;
    if work > DEFAULT_TRIPLE_CAP {
        return Err(Error::Budget {
            estimate: work,
            cap: DEFAULT_TRIPLE_CAP,
        });
    }
    let moduli: Vec<u64> = square_free_in(q.ceil() as u64, (2.0 * q).ceil() as u64)
        .filter(|&m| (m as f64) < 2.0 * q)
        .collect();
    let mut traces: HashMap<i64, u64> = HashMap::new();
    for a in xi {
        let left = a
            .checked_mul(frak_a)
            .ok_or_else(|| Error::invalid("matrix entries overflow 64 bits"))?;
        for w in omega {
            *traces.entry(left.trace_of_product(w)).or_default() += 1;
        }
    }
    let e1: i128 = moduli
        .par_iter()
        .map(|&m| {
            let table = RamanujanTable::new(m);
            traces
                .iter()
                .map(|(&t, &c)| table.get(t) as i128 * c as i128)
                .sum::<i128>()
        })
        .sum();
    let value = (e1 as f64).abs();
    let (nx, nw) = (xi.len() as f64, omega.len() as f64);
    let bound5 = e1_bound_unconditional(q, nx, nw, x);
    let bound6 = e1_bound_energy(q, nw, x, z);
    Ok(E1Report {
        q,
        x,
        z,
        moduli,
        xi_size: xi.len(),
        omega_size: omega.len(),
        e1,
        value,
        bound5,
        bound6,
        ratio5: value / bound5,
        ratio6: value / bound6,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorAggregate {
    pub q0: f64,
    pub level: f64,
    /// `ℰ = Σ_{𝔮 < 𝒬} |r(𝔮)|` from the main-term decomposition.
    pub direct: f64,
    /// Dyadic `Q` with `max_𝔞 |ℰ₁(Q; 𝔞)|`.
    pub dyadic: Vec<(f64, f64)>,
    /// `log 𝒬 · Σ_𝔞 Σ_Q |ℰ₁(Q; 𝔞)| / Q`.
    pub aggregate: f64,
}

/// The error `ℰ` of a sequence next to its dyadic assembly from `ℰ₁`.
pub fn error_aggregate(seq: &SequenceA, q0: f64, level: f64) -> Result<ErrorAggregate> {
    if !(q0 >= 1.0 && level > q0) {
        return Err(Error::invalid("need 1 ≤ Q₀ < 𝒬"));
    }
    let direct = square_free_in(1, level.ceil() as u64)
        .filter(|&m| (m as f64) < level)
        .map(|m| main_term_decomposition(seq, m, q0).map(|t| t.remainder.abs()))
        .sum::<Result<f64>>()?;
    let mut dyadic = Vec::new();
    let mut total = 0.0;
    let mut q = q0;
    while q < level {
        let mut worst: f64 = 0.0;
        for a in &seq.aleph {
            let rep = error_sum_e1_from_sets(q, a, seq.x, seq.z, &seq.xi, &seq.omega)?;
            worst = worst.max(rep.value);
            total += rep.value / q;
        }
        dyadic.push((q, worst));
        q *= 2.0;
    }
    Ok(ErrorAggregate {
        q0,
        level,
        direct,
        dyadic,
        aggregate: level.ln() * total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(v: &[u64]) -> Alphabet {
        Alphabet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn remainder_examples() {
        let s = trace_multiplicities(&alpha(&[1]), 10.0).unwrap();
        assert_eq!(remainder_rq(&s, 1).unwrap(), 0.0);
        assert_eq!(remainder_rq(&s, 2).unwrap(), -0.5);
        assert_eq!(remainder_rq(&s, 3).unwrap(), 0.0);
        assert!(matches!(
            remainder_rq(&s, 4),
            Err(Error::NotSquareFree { value: 4 })
        ));
        for q in 1..20 {
            assert_eq!(
                trace_residue_counts(&s, q).unwrap().iter().sum::<u64>(),
                s.total
            );
        }
    }

    #[test]
    fn sweep_small_alpha() {
        let r = level_sweep(&alpha(&[1, 2]), 100.0, &[0.1]).unwrap();
        assert_eq!(r.rows[0].ratio, 0.0);
        assert!(level_sweep(&alpha(&[1, 2]), 100.0, &[1.0]).is_err());
    }

    #[test]
    fn discrepancy_examples() {
        let lifts: Vec<Mat2<i64>> = sl2_elements(2)
            .unwrap()
            .into_iter()
            .map(|m| Mat2::new(m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64))
            .collect();
        assert_eq!(equidistribution_discrepancy(&lifts, 2).unwrap(), 0.0);
        let d = equidistribution_discrepancy(&[Mat2::identity()], 2).unwrap();
        assert!((d - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn aleph_trivial_modulus() {
        let a = construct_aleph(50.0, 1).unwrap();
        let ball = enumerate_ball(&alpha(&[1, 2]), a.t).unwrap();
        assert_eq!(a.group_order, 1);
        assert_eq!(a.len(), ball.len());
        assert!((a.t - 50.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn aleph_mod_two() {
        let a = construct_aleph(1e4, 2).unwrap();
        assert!(!a.is_empty());
        assert!(a.elements.iter().all(|m| m.norm() < 1e4 && m.det() == 1));
        // each class of SL₂(2) receives exactly |𝒮′(T)| elements
        let mut per_class: HashMap<[u32; 4], usize> = HashMap::new();
        for m in &a.elements {
            *per_class.entry(m.reduce(2)).or_default() += 1;
        }
        assert_eq!(per_class.len(), 6);
        assert!(per_class.values().all(|&c| c == a.s_prime_size));
        assert_eq!(a.discrepancy(2).unwrap(), 0.0);
        match construct_aleph(1e2, 2) {
            Ok(small) => assert!(small.elements.iter().all(|m| m.norm() < 1e2)),
            Err(e) => assert!(matches!(e, Error::InvalidInput(_))),
        }
    }

    fn toy() -> SequenceA {
        let a = alpha(&[1, 2]);
        build_sequence_an(&a, 6.0, 6.0, &AlephSet::identity()).unwrap()
    }

    #[test]
    fn sequence_counting() {
        let id = build_sequence_from_sets(
            2.0,
            2.0,
            2.0,
            vec![Mat2::identity()],
            vec![Mat2::identity()],
            vec![Mat2::identity()],
        )
        .unwrap();
        assert_eq!(id.counts, BTreeMap::from([(2, 1)]));
        let seq = toy();
        assert_eq!(
            seq.total as usize,
            seq.xi.len() * seq.aleph.len() * seq.omega.len()
        );
        let a = alpha(&[1, 2]);
        let ball = enumerate_ball(&a, 4.0).unwrap();
        let small = build_sequence_an(&a, 4.0, 4.0, &AlephSet::identity()).unwrap();
        let mut direct: BTreeMap<i64, u64> = BTreeMap::new();
        for x in &ball {
            for w in &ball {
                *direct.entry((*x * *w).trace()).or_default() += 1;
            }
        }
        assert_eq!(small.counts, direct);
        assert_eq!(small.total, 16);
    }

    #[test]
    fn main_term_limits() {
        let seq = toy();
        let one = main_term_decomposition(&seq, 1, 10.0).unwrap();
        assert!((one.main - seq.total as f64).abs() < 1e-9 && one.remainder.abs() < 1e-9);
        for q in [2u64, 3, 5, 6, 30] {
            let low = main_term_decomposition(&seq, q, 1.0).unwrap();
            assert!(low.main.abs() < 1e-9, "no divisor below Q₀ = 1");
            let half = main_term_decomposition(&seq, q, 1.5).unwrap();
            assert!((half.main - seq.total as f64 / q as f64).abs() < 1e-9);
            let full = main_term_decomposition(&seq, q, q as f64 + 1.0).unwrap();
            assert!((full.main - full.filtered as f64).abs() < 1e-8 * seq.total as f64);
            assert_eq!(full.main_exact_numerator, full.filtered as i128 * q as i128);
            assert!(full.imag.abs() <= 1e-8 * seq.total as f64);
        }
    }

    #[test]
    fn e1_identity_case() {
        let id = vec![Mat2::identity()];
        let rep = error_sum_e1_from_sets(50.0, &Mat2::identity(), 2.0, 2.0, &id, &id).unwrap();
        // square-free moduli in [50, 100): c_q(2) = μ(q) + 2μ(q/2)·[2 | q]
        let expected: i128 = rep
            .moduli
            .iter()
            .map(|&q| ramanujan_sum(q, 2) as i128)
            .sum();
        assert_eq!(rep.e1, expected);
        let primes = error_sum_e1_from_sets(11.0, &Mat2::identity(), 2.0, 2.0, &id, &id).unwrap();
        let odd_primes: Vec<u64> = primes
            .moduli
            .iter()
            .copied()
            .filter(|&q| crate::arith::factor::is_prime(q))
            .collect();
        let prime_part: i64 = odd_primes.iter().map(|&p| ramanujan_sum(p, 2)).sum();
        assert_eq!(prime_part, -(odd_primes.len() as i64));
        let expected = crate::arith::factor::primes_below(22)
            .into_iter()
            .filter(|&p| p >= 11)
            .count();
        assert_eq!(expected, odd_primes.len());
    }

    #[test]
    fn e1_toy_bounds() {
        let rep = error_sum_e1(&alpha(&[1, 2]), 8.0, &Mat2::identity(), 6.0, 6.0).unwrap();
        assert!(rep.bound5 > 0.0 && rep.bound6 > 0.0 && rep.bound6.is_finite());
        assert!(rep.value <= 10.0 * rep.bound5, "{rep:?}");
    }
}
