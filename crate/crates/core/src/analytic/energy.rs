//! Additive energy of the Frobenius ball `B_X = {ξ ∈ SL₂(ℤ) : ‖ξ‖ ≤ X}`.
//!
//! `E(X) = #{γ₁ + γ₂ = γ₃ + γ₄}` is `Σ_v m(v)²` with `m(v)` the number of
//! ordered pairs summing to `v`; the difference form `Σ_M 𝒩_M(X)²` with
//! `𝒩_M(X) = #{ξ − ξ′ = M}` counts the same quadruples after swapping
//! `γ₂ ↔ γ₄`, and both are computed independently.

use rayon::prelude::*;
use serde::Serialize;

use super::sl2ball::Sl2Ball;
use crate::arith::Mat2;
use crate::error::{Error, Result};
use crate::fit::loglog_fit;

/// Cells in the dense `(b, c, d)` counting grid.
pub const GRID_CAP: f64 = 2.5e8;
/// Ordered pairs visited per pass.
pub const PAIR_CAP: f64 = 2e10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub x: f64,
    pub ball: u64,
    /// `Σ_v m(v)²` over pair sums.
    pub energy: u64,
    /// `Σ_M 𝒩_M²` over pair differences.
    pub diff_energy: u64,
    /// `𝒩_0`.
    pub n_zero: u64,
    /// `Σ_M 𝒩_M`.
    pub n_total: u64,
    /// Number of `M` with `𝒩_M > 0`.
    pub distinct_differences: u64,
    /// `max_{M ≠ 0} 𝒩_M`.
    pub max_offdiagonal: u64,
    /// `2·|B|² − |B|`.
    pub diagonal_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyFit {
    pub reports: Vec<EnergyReport>,
    pub exponent: f64,
    pub intercept: f64,
}

#[derive(Default)]
struct Tally {
    energy: u64,
    total: u64,
    nonzero: u64,
    max_offdiag: u64,
    zero: u64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.energy += o.energy;
        self.total += o.total;
        self.nonzero += o.nonzero;
        self.max_offdiag = self.max_offdiag.max(o.max_offdiag);
        self.zero += o.zero;
        self
    }
}

/// Elements bucketed by their first entry, as `(b, c, d)` offset to be
/// non-negative.
struct Buckets {
    reach: i64,
    by_a: Vec<Vec<[i64; 3]>>,
}

impl Buckets {
    fn new(ball: &[Mat2<i64>], reach: i64) -> Self {
        let mut by_a = vec![Vec::new(); (2 * reach + 1) as usize];
        for m in ball {
            by_a[(m.a + reach) as usize].push([m.b + reach, m.c + reach, m.d + reach]);
        }
        Buckets { reach, by_a }
    }

    /// Counts ordered pairs grouped by `a₁ ± a₂ = target`, then by the
    /// remaining three coordinates of `γ₁ ± γ₂` in a dense grid.
    fn tally(&self, target: i64, minus: bool, grid: &mut [u32], touched: &mut Vec<usize>) -> Tally {
        let r = self.reach;
        let side = (4 * r + 1) as usize;
        let mut t = Tally::default();
        for a1 in -r..=r {
            let a2 = if minus { a1 - target } else { target - a1 };
            if a2.abs() > r {
                continue;
            }
            let (p, q) = (&self.by_a[(a1 + r) as usize], &self.by_a[(a2 + r) as usize]);
            for u in p {
                for v in q {
                    let idx = if minus {
                        // (u − v) + 2r, in [0, 4r]
                        let w = [
                            u[0] - v[0] + 2 * r,
                            u[1] - v[1] + 2 * r,
                            u[2] - v[2] + 2 * r,
                        ];
                        (w[0] as usize * side + w[1] as usize) * side + w[2] as usize
                    } else {
                        ((u[0] + v[0]) as usize * side + (u[1] + v[1]) as usize) * side
                            + (u[2] + v[2]) as usize
                    };
                    let g = &mut grid[idx];
                    if *g == 0 {
                        touched.push(idx);
                    }
                    t.energy += 2 * *g as u64 + 1;
                    *g += 1;
                }
            }
        }
        let zero_idx = if minus && target == 0 {
            let c = 2 * r as usize;
            Some((c * side + c) * side + c)
        } else {
            None
        };
        for idx in touched.drain(..) {
            let n = grid[idx] as u64;
            t.total += n;
            t.nonzero += 1;
            if Some(idx) == zero_idx {
                t.zero = n;
            } else {
                t.max_offdiag = t.max_offdiag.max(n);
            }
            grid[idx] = 0;
        }
        t
    }

    fn pass(&self, minus: bool) -> Tally {
        let r = self.reach;
        let side = (4 * r + 1) as usize;
        (-2 * r..=2 * r)
            .into_par_iter()
            .map_init(
                || (vec![0u32; side * side * side], Vec::new()),
                |(grid, touched), target| self.tally(target, minus, grid, touched),
            )
            .reduce(Tally::default, Tally::merge)
    }
}

/// Exact sum and difference energies of the norm ball of radius `X`.
pub fn additive_energy(x: f64) -> Result<EnergyReport> {
    let ball = Sl2Ball::norm(x)?;
    let reach = x.floor() as i64;
    let side = (4 * reach + 1) as f64;
    if side.powi(3) > GRID_CAP {
        return Err(Error::Budget {
            estimate: side.powi(3),
            cap: GRID_CAP,
        });
    }
    let pairs = ball.estimate().powi(2);
    if pairs > PAIR_CAP {
        return Err(Error::Budget {
            estimate: pairs,
            cap: PAIR_CAP,
        });
    }
    let elems = ball.collect()?;
    let n = elems.len() as u64;
    let buckets = Buckets::new(&elems, reach);
    let sums = buckets.pass(false);
    let diffs = buckets.pass(true);
    Ok(EnergyReport {
        x,
        ball: n,
        energy: sums.energy,
        diff_energy: diffs.energy,
        n_zero: diffs.zero,
        n_total: diffs.total,
        distinct_differences: diffs.nonzero,
        max_offdiagonal: diffs.max_offdiag,
        diagonal_bound: 2 * n * n - n,
    })
}

/// `E(X)` across a grid of radii with the log-log growth exponent.
pub fn energy_fit(xs: &[f64]) -> Result<EnergyFit> {
    if xs.len() < 2 {
        return Err(Error::invalid("an energy fit needs at least two radii"));
    }
    let reports = xs
        .iter()
        .map(|&x| additive_energy(x))
        .collect::<Result<Vec<_>>>()?;
    let es: Vec<f64> = reports.iter().map(|r| r.energy as f64).collect();
    let f = loglog_fit(xs, &es)?;
    Ok(EnergyFit {
        reports,
        exponent: f.slope,
        intercept: f.intercept,
    })
}
