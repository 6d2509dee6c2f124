//! The semigroups Γ_A: norm-ball enumeration, trace multiplicities, growth
//! fits, reductions mod q and admissibility.
//!
//! Γ_A is generated by `g_a g_b` with `g_a = (a 1; 1 0)`, `a, b ∈ A`, and
//! contains the identity. A word `g_{a₁}⋯g_{a_n}` equals
//! `(p_n p_{n−1}; q_n q_{n−1})` for the convergents of `[a₁; a₂, …, a_n]`, so
//! distinct words give distinct matrices and every entry is nonnegative.
//! Right multiplication by a generator never decreases the norm and grows
//! with the letter, which lets the depth-first search stop at the first
//! letter that leaves the ball.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::{gcd_u64, square_free_in};
use crate::arith::Mat2;
use crate::dimension::quick_dimension;
use crate::error::{Error, Result};
use crate::fit::{loglog_fit, LineFit};

/// Largest letter accepted; keeps `a·entry` inside `i64` for any norm bound
/// below [`MAX_NORM`].
pub const MAX_LETTER: u64 = 1_000_000;
pub const MAX_NORM: f64 = 1e12;
/// Default cap on the estimated number of visited matrices.
pub const DEFAULT_VISIT_CAP: f64 = 5e9;
/// Default cap on the estimated number of matrices held in memory.
pub const DEFAULT_STORE_CAP: f64 = 5e7;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    letters: Vec<u64>,
}

impl Alphabet {
    /// Sorted, deduplicated alphabet. Letters must lie in `1..=MAX_LETTER`.
    pub fn new(letters: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut letters: Vec<u64> = letters.into_iter().collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.is_empty() {
            return Err(Error::invalid("alphabet is empty"));
        }
        if letters[0] == 0 {
            return Err(Error::invalid("partial quotients must be at least 1"));
        }
        if *letters.last().unwrap() > MAX_LETTER {
            return Err(Error::invalid(format!(
                "letters above {MAX_LETTER} are not supported"
            )));
        }
        Ok(Alphabet { letters })
    }

    /// `{lo, …, hi}`.
    pub fn range(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty range {lo}..{hi}")));
        }
        Alphabet::new(lo..=hi)
    }

    pub fn letters(&self) -> &[u64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_one_two(&self) -> bool {
        self.letters.contains(&1) && self.letters.contains(&2)
    }

    pub fn all_even(&self) -> bool {
        self.letters.iter().all(|a| a % 2 == 0)
    }

    /// Generators `g_a g_b = (ab+1 a; b 1)` of the even-length semigroup.
    pub fn pair_generators(&self) -> Vec<Mat2<i64>> {
        let mut out = Vec::with_capacity(self.len() * self.len());
        for &a in &self.letters {
            for &b in &self.letters {
                out.push(Mat2::generator(a as i64) * Mat2::generator(b as i64));
            }
        }
        out
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    /// Comma-separated letters and inclusive ranges, e.g. `1,2,5` or `1-10`.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for part in s.split(',').map(str::trim) {
            let parse = |t: &str| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| {
                        Error::invalid(format!("cannot parse letter {t:?} in alphabet {s:?}"))
                    })
                    .and_then(|v| {
                        u64::try_from(v)
                            .map_err(|_| Error::invalid(format!("negative letter {v} in alphabet")))
                    })
            };
            match split_range(part) {
                Some((lo, hi)) => {
                    let (lo, hi) = (parse(lo)?, parse(hi)?);
                    if lo > hi {
                        return Err(Error::invalid(format!("empty range {part:?}")));
                    }
                    letters.extend(lo..=hi);
                }
                None => letters.push(parse(part)?),
            }
        }
        Alphabet::new(letters)
    }
}

/// `lo..hi`, `lo..=hi` or `lo-hi`; a leading minus sign is not a separator.
fn split_range(part: &str) -> Option<(&str, &str)> {
    if let Some((lo, hi)) = part.split_once("..") {
        return Some((lo, hi.trim_start_matches('=')));
    }
    let i = part.get(1..)?.find('-')? + 1;
    Some((&part[..i], &part[i + 1..]))
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The strict norm ball `{γ ∈ Γ_A : ‖γ‖ < N}`.
#[derive(Debug, Clone)]
pub struct Ball<'a> {
    alphabet: &'a Alphabet,
    bound: f64,
    limit: i128,
    visit_cap: f64,
}

impl<'a> Ball<'a> {
    pub fn new(alphabet: &'a Alphabet, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::invalid(format!(
                "norm bound {bound} must be finite and nonnegative"
            )));
        }
        if bound > MAX_NORM {
            return Err(Error::invalid(format!(
                "norm bound {bound} above {MAX_NORM:e}"
            )));
        }
        // ‖γ‖ < N ⇔ ‖γ‖² < N², and ‖γ‖² is an integer
        let limit = (bound * bound).ceil() as i128;
        Ok(Ball {
            alphabet,
            bound,
            limit,
            visit_cap: DEFAULT_VISIT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.visit_cap = cap;
        self
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.alphabet
    }

    /// Rough upper estimate of the ball size, `4 N^{2δ} + 2 log₂ N + 2`.
    pub fn estimate(&self) -> f64 {
        let n = self.bound.max(2.0);
        4.0 * n.powf(2.0 * quick_dimension(self.alphabet)) + 2.0 * n.log2() + 2.0
    }

    fn check_cap(&self, cap: f64) -> Result<()> {
        let est = self.estimate();
        if est > cap {
            return Err(Error::Budget { estimate: est, cap });
        }
        Ok(())
    }

    fn contains(&self, m: &Mat2<i64>) -> bool {
        m.norm_sq_wide() < self.limit
    }

    /// Roots of the independent subtrees: the length-two words in the ball.
    fn prefixes(&self) -> Vec<Mat2<i64>> {
        let mut out = Vec::new();
        let id = Mat2::<i64>::identity();
        self.push_children(&id, |m| out.push(m));
        out
    }

    fn push_children(&self, m: &Mat2<i64>, mut push: impl FnMut(Mat2<i64>)) {
        for &a in self.alphabet.letters() {
            let m1 = m.mul_generator(a as i64);
            if !self.contains(&m1) {
                break;
            }
            for &b in self.alphabet.letters() {
                let m2 = m1.mul_generator(b as i64);
                if !self.contains(&m2) {
                    break;
                }
                push(m2);
            }
        }
    }

    fn explore(&self, root: Mat2<i64>, len: u32, f: &mut impl FnMut(&Mat2<i64>, u32)) {
        let mut stack = vec![(root, len)];
        while let Some((m, l)) = stack.pop() {
            f(&m, l);
            self.push_children(&m, |c| stack.push((c, l + 2)));
        }
    }

    /// Calls `f(γ, word length)` for every ball element, depth first, in a
    /// deterministic order.
    pub fn for_each(&self, mut f: impl FnMut(&Mat2<i64>, u32)) -> Result<()> {
        self.check_cap(self.visit_cap)?;
        let id = Mat2::identity();
        if self.contains(&id) {
            self.explore(id, 0, &mut f);
        }
        Ok(())
    }

    /// Parallel fold over the ball, one task per length-two prefix.
    /// `reduce` must be associative and commutative for the result to be
    /// schedule independent.
    pub fn par_fold<T, I, F, R>(&self, init: I, fold: F, reduce: R) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &Mat2<i64>, u32) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        self.check_cap(self.visit_cap)?;
        let id = Mat2::identity();
        if !self.contains(&id) {
            return Ok(init());
        }
        let mut acc = init();
        fold(&mut acc, &id, 0);
        let rest = self
            .prefixes()
            .into_par_iter()
            .map(|root| {
                let mut t = init();
                self.explore(root, 2, &mut |m, l| fold(&mut t, m, l));
                t
            })
            .reduce(&init, &reduce);
        Ok(reduce(acc, rest))
    }

    /// Number of ball elements.
    pub fn count(&self) -> Result<u64> {
        self.par_fold(|| 0u64, |n, _, _| *n += 1, |a, b| a + b)
    }

    /// All ball elements in enumeration order.
    pub fn collect(&self) -> Result<Vec<Mat2<i64>>> {
        self.check_cap(DEFAULT_STORE_CAP.min(self.visit_cap))?;
        let mut out = Vec::new();
        self.for_each(|m, _| out.push(*m))?;
        Ok(out)
    }
}

/// `{γ ∈ Γ_A : ‖γ‖ < N}` as a list.
pub fn enumerate_ball(alphabet: &Alphabet, bound: f64) -> Result<Vec<Mat2<i64>>> {
    Ball::new(alphabet, bound)?.collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStats {
    pub norm_bound: f64,
    pub multiplicities: BTreeMap<u64, u64>,
    pub total: u64,
}

impl TraceStats {
    fn from_counts(norm_bound: f64, counts: Vec<u64>) -> Self {
        let multiplicities: BTreeMap<u64, u64> = counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(t, c)| (t as u64, c))
            .collect();
        let total = multiplicities.values().sum();
        TraceStats {
            norm_bound,
            multiplicities,
            total,
        }
    }

    /// `𝓜_A(t)`; zero for traces not attained.
    pub fn multiplicity(&self, t: u64) -> u64 {
        self.multiplicities.get(&t).copied().unwrap_or(0)
    }

    pub fn traces(&self) -> impl Iterator<Item = u64> + '_ {
        self.multiplicities.keys().copied()
    }

    /// Ball elements with `q | tr γ`, with multiplicity.
    pub fn count_divisible(&self, q: u64) -> u64 {
        self.multiplicities
            .iter()
            .filter(|(t, _)| *t % q == 0)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.multiplicities.values().copied().max().unwrap_or(0)
    }

    /// CSV with header `t,multiplicity`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "t,multiplicity")?;
        for (t, c) in &self.multiplicities {
            writeln!(w, "{t},{c}")?;
        }
        Ok(())
    }
}

/// Trace multiplicities over the ball of norm `N`.
pub fn trace_multiplicities(alphabet: &Alphabet, bound: f64) -> Result<TraceStats> {
    trace_multiplicities_with_cap(alphabet, bound, DEFAULT_VISIT_CAP)
}

pub fn trace_multiplicities_with_cap(
    alphabet: &Alphabet,
    bound: f64,
    cap: f64,
) -> Result<TraceStats> {
    let ball = Ball::new(alphabet, bound)?.with_cap(cap);
    // tr γ ≤ √2 ‖γ‖ < √2 N
    let len = (std::f64::consts::SQRT_2 * bound).ceil() as usize + 2;
    let counts = ball.par_fold(
        || vec![0u64; len],
        |v, m, _| v[m.trace() as usize] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    Ok(TraceStats::from_counts(bound, counts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub t: u64,
    pub multiplicity: u64,
    /// `𝓜(t)/t^{2δ−1}`.
    pub ratio: f64,
}

/// `𝓜_A(t)` for every `2 ≤ t ≤ tMax`, complete because the ball has radius
/// `3·tMax`. A word of trace `t` is `(pₙ pₙ₋₁; qₙ qₙ₋₁)` with every entry at
/// most `pₙ ≤ t`, so its norm is at most `2t`.
pub fn trace_profile(alphabet: &Alphabet, t_max: u64, delta: f64) -> Result<Vec<ProfileRow>> {
    if t_max < 2 {
        return Err(Error::invalid(format!("tMax = {t_max} below 2")));
    }
    let stats = trace_multiplicities(alphabet, 3.0 * t_max as f64)?;
    Ok((2..=t_max)
        .map(|t| {
            let multiplicity = stats.multiplicity(t);
            ProfileRow {
                t,
                multiplicity,
                ratio: multiplicity as f64 / (t as f64).powf(2.0 * delta - 1.0),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HensleyFit {
    pub bounds: Vec<f64>,
    pub totals: Vec<u64>,
    /// Slope of `log(total)` against `log N`; compare with `2δ_A`.
    pub exponent: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Growth exponent of the ball size over increasing norm bounds.
pub fn hensley_fit(alphabet: &Alphabet, bounds: &[f64]) -> Result<HensleyFit> {
    if bounds.len() < 3 {
        return Err(Error::invalid("need at least three norm bounds"));
    }
    if bounds.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("norm bounds must increase"));
    }
    let totals = bounds
        .iter()
        .map(|&n| Ball::new(alphabet, n)?.count())
        .collect::<Result<Vec<u64>>>()?;
    if totals.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::invalid("ball sizes are constant; no growth to fit"));
    }
    let ys: Vec<f64> = totals.iter().map(|&t| t as f64).collect();
    let LineFit {
        slope,
        intercept,
        residuals,
    } = loglog_fit(bounds, &ys)?;
    Ok(HensleyFit {
        bounds: bounds.to_vec(),
        totals,
        exponent: slope,
        intercept,
        residuals,
    })
}

/// The image of Γ_A in `SL₂(ℤ/q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularClosure {
    pub modulus: u64,
    pub elements: HashSet<[u32; 4]>,
    pub trace_residues: BTreeSet<u64>,
}

impl ModularClosure {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

fn mul_mod(x: &[u32; 4], y: &[u32; 4], q: u64) -> [u32; 4] {
    let e =
        |a: u32, b: u32, c: u32, d: u32| ((a as u64 * b as u64 + c as u64 * d as u64) % q) as u32;
    [
        e(x[0], y[0], x[1], y[2]),
        e(x[0], y[1], x[1], y[3]),
        e(x[2], y[0], x[3], y[2]),
        e(x[2], y[1], x[3], y[3]),
    ]
}

/// Breadth-first closure of the identity under right multiplication by every
/// `g_a g_b` mod `q`.
pub fn closure_mod_q(alphabet: &Alphabet, q: u64) -> Result<ModularClosure> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    if q > 1 << 16 {
        return Err(Error::Budget {
            estimate: (q as f64).powi(3),
            cap: 2f64.powi(48),
        });
    }
    let mut gens: Vec<[u32; 4]> = alphabet
        .pair_generators()
        .iter()
        .map(|g| g.reduce(q))
        .collect();
    gens.sort_unstable();
    gens.dedup();
    let id = Mat2::<i64>::identity().reduce(q);
    let mut elements = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = mul_mod(&x, g, q);
            if elements.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let trace_residues = elements
        .iter()
        .map(|m| (m[0] as u64 + m[3] as u64) % q)
        .collect();
    Ok(ModularClosure {
        modulus: q,
        elements,
        trace_residues,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub t: i64,
    pub admissible: bool,
    /// First square-free modulus whose closure misses `t`.
    pub witness: Option<u64>,
    pub q_max: u64,
}

/// Trace residues of Γ_A for every square-free `2 ≤ q ≤ q_max`, computed
/// once and reused across many `t`.
#[derive(Debug, Clone)]
pub struct AdmissibilityTable {
    q_max: u64,
    residues: Vec<(u64, BTreeSet<u64>)>,
}

impl AdmissibilityTable {
    pub fn new(alphabet: &Alphabet, q_max: u64) -> Result<Self> {
        if q_max < 2 {
            return Err(Error::invalid("q_max must be at least 2"));
        }
        let residues = square_free_in(2, q_max + 1)
            .map(|q| Ok((q, closure_mod_q(alphabet, q)?.trace_residues)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AdmissibilityTable { q_max, residues })
    }

    pub fn check(&self, t: i64) -> Admissibility {
        let witness = self
            .residues
            .iter()
            .find(|(q, set)| !set.contains(&(t.rem_euclid(*q as i64) as u64)))
            .map(|(q, _)| *q);
        Admissibility {
            t,
            admissible: witness.is_none(),
            witness,
            q_max: self.q_max,
        }
    }
}

/// Whether `t` lies in the trace residues mod every square-free `q ≤ q_max`.
pub fn is_admissible(alphabet: &Alphabet, t: i64, q_max: u64) -> Result<Admissibility> {
    Ok(AdmissibilityTable::new(alphabet, q_max)?.check(t))
}

/// gcd of all traces in the ball.
pub fn primitivity_gcd(alphabet: &Alphabet, bound: f64) -> Result<u64> {
    let stats = trace_multiplicities(alphabet, bound)?;
    if stats.total == 0 {
        return Err(Error::invalid("the ball is empty"));
    }
    Ok(stats.traces().fold(0, gcd_u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(v: &[u64]) -> Alphabet {
        Alphabet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn profile_is_complete() {
        let a = alpha(&[1, 2, 3]);
        let rows = trace_profile(&a, 60, 0.7).unwrap();
        assert_eq!(rows[0].t, 2);
        assert_eq!(rows[0].multiplicity, 1);
        // a much larger ball finds nothing new below tMax
        let wide = trace_multiplicities(&a, 1000.0).unwrap();
        for r in &rows {
            assert_eq!(r.multiplicity, wide.multiplicity(r.t), "t = {}", r.t);
        }
        assert!(trace_profile(&a, 1, 0.7).is_err());
    }

    #[test]
    fn alphabet_parsing() {
        assert_eq!("1,2".parse::<Alphabet>().unwrap().letters(), &[1, 2]);
        assert_eq!("1-4".parse::<Alphabet>().unwrap().letters(), &[1, 2, 3, 4]);
        assert_eq!(
            "1..3, 7".parse::<Alphabet>().unwrap().letters(),
            &[1, 2, 3, 7]
        );
        assert_eq!("3,1,3".parse::<Alphabet>().unwrap().letters(), &[1, 3]);
        assert!("0,1".parse::<Alphabet>().is_err());
        assert!("".parse::<Alphabet>().is_err());
        assert!("-1,2".parse::<Alphabet>().is_err());
        assert!("x".parse::<Alphabet>().is_err());
        let a = alpha(&[2, 4]);
        assert!(a.all_even() && !a.contains_one_two());
        assert_eq!(a.to_string(), "{2,4}");
    }

    #[test]
    fn ball_examples() {
        let ball = enumerate_ball(&alpha(&[1]), 10.0).unwrap();
        assert_eq!(
            ball,
            vec![
                Mat2::identity(),
                Mat2::new(2, 1, 1, 1),
                Mat2::new(5, 3, 3, 2)
            ]
        );
        let mut ball = enumerate_ball(&alpha(&[1, 2]), 4.0).unwrap();
        ball.sort();
        assert_eq!(
            ball,
            vec![
                Mat2::identity(),
                Mat2::new(2, 1, 1, 1),
                Mat2::new(3, 1, 2, 1),
                Mat2::new(3, 2, 1, 1)
            ]
        );
        assert!(enumerate_ball(&alpha(&[1]), 1.0).unwrap().is_empty());
    }

    #[test]
    fn multiplicity_examples() {
        let s = trace_multiplicities(&alpha(&[1, 2]), 4.0).unwrap();
        assert_eq!(s.multiplicities, BTreeMap::from([(2, 1), (3, 1), (4, 2)]));
        assert_eq!(s.total, 4);
        let s = trace_multiplicities(&alpha(&[1]), 1.0).unwrap();
        assert!(s.multiplicities.is_empty() && s.total == 0);
        let mut buf = Vec::new();
        trace_multiplicities(&alpha(&[1]), 10.0)
            .unwrap()
            .write_csv(&mut buf)
            .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,multiplicity\n2,1\n3,1\n7,1\n"
        );
    }

    #[test]
    fn parallel_fold_matches_sequential() {
        let a = alpha(&[1, 3, 4]);
        let ball = Ball::new(&a, 300.0).unwrap();
        let mut seq = Vec::new();
        ball.for_each(|m, _| seq.push(*m)).unwrap();
        let mut par = ball
            .par_fold(
                Vec::new,
                |v, m, _| v.push(*m),
                |mut x, y| {
                    x.extend(y);
                    x
                },
            )
            .unwrap();
        seq.sort();
        par.sort();
        assert_eq!(seq, par);
    }

    #[test]
    fn budget_guard() {
        let a = Alphabet::range(1, 10).unwrap();
        let err = Ball::new(&a, 1e6)
            .unwrap()
            .with_cap(1e6)
            .count()
            .unwrap_err();
        assert!(err.is_budget());
        assert!(Ball::new(&a, -1.0).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure_mod_q(&alpha(&[1, 2]), 5).unwrap().size(), 120);
        assert_eq!(
            closure_mod_q(&alpha(&[2]), 2).unwrap().trace_residues,
            BTreeSet::from([0])
        );
        let c = closure_mod_q(&alpha(&[3, 7]), 1).unwrap();
        assert_eq!(
            (c.size(), c.trace_residues.clone()),
            (1, BTreeSet::from([0]))
        );
        assert!(closure_mod_q(&alpha(&[1]), 0).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let a12 = AdmissibilityTable::new(&alpha(&[1, 2]), 30).unwrap();
        assert!((-50..200).all(|t| a12.check(t).admissible));
        let r = is_admissible(&alpha(&[2]), 3, 2).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.witness, Some(2));
        assert!(
            is_admissible(&Alphabet::range(1, 10).unwrap(), 49, 30)
                .unwrap()
                .admissible
        );
    }

    #[test]
    fn primitivity() {
        assert_eq!(primitivity_gcd(&alpha(&[1, 2]), 10.0).unwrap(), 1);
        assert_eq!(primitivity_gcd(&alpha(&[2]), 10.0).unwrap(), 2);
        assert_eq!(primitivity_gcd(&alpha(&[1]), 10.0).unwrap(), 1);
        assert!(primitivity_gcd(&alpha(&[1]), 1.0).is_err());
    }

    #[test]
    fn hensley_degenerate() {
        let f = hensley_fit(&alpha(&[1]), &[50.0, 100.0, 200.0, 400.0, 800.0]).unwrap();
        assert!(f.exponent.abs() < 0.25, "{f:?}");
        assert!(hensley_fit(&alpha(&[1]), &[50.0, 100.0]).is_err());
        assert!(hensley_fit(&alpha(&[1]), &[3.0, 3.1, 3.2]).is_err());
    }
}
