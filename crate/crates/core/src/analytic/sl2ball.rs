//! Balls in the full group `SL₂(ℤ)`.
//!
//! Elements are generated row by row: for each coprime bottom row `(c, d)` the
//! solutions of `ad − bc = 1` form the line `(a₀ + kc, b₀ + kd)`, and only the
//! range of `k` meeting the ball is visited.

use num_integer::{Integer, Roots};
use rayon::prelude::*;

use super::bump::BumpFunction;
use crate::arith::Mat2;
use crate::error::{Error, Result};

pub const DEFAULT_SL2_CAP: f64 = 1e8;
const CHUNKS: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `|a| + |d| ≤ reach` and `|b| + |c| ≤ reach`.
    Bump { reach: i64 },
    /// `a² + b² + c² + d² ≤ bound_sq`.
    Norm { bound_sq: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Ball {
    pub x: f64,
    shape: Shape,
    cap: f64,
}

/// Integer `k` with `|base + k·step| ≤ lim`, as an inclusive range, or `None`
/// for "every k" when `step = 0` and the constraint holds.
fn line_range(base: i64, step: i64, lim: i64) -> Option<Option<(i64, i64)>> {
    if step == 0 {
        return if base.abs() <= lim { None } else { Some(None) };
    }
    let (base, step) = if step < 0 {
        (-base, -step)
    } else {
        (base, step)
    };
    let lo = Integer::div_ceil(&(-lim - base), &step);
    let hi = Integer::div_floor(&(lim - base), &step);
    Some(if lo <= hi { Some((lo, hi)) } else { None })
}

impl Sl2Ball {
    /// Support of `φ_X`: every `ξ` with `|a ± d|, |b ± c| < W·X`.
    pub fn bump(x: f64, phi: &BumpFunction) -> Result<Self> {
        if !(x >= 1.0 && x.is_finite()) {
            return Err(Error::invalid(format!("scale X = {x} must be at least 1")));
        }
        // |a + d| and |a − d| are both below W·X iff |a| + |d| is.
        let reach = (phi.width * x).ceil() as i64 - 1;
        Ok(Sl2Ball {
            x,
            shape: Shape::Bump { reach },
            cap: DEFAULT_SL2_CAP,
        })
    }

    /// Frobenius ball `‖ξ‖ ≤ X`.
    pub fn norm(x: f64) -> Result<Self> {
        if !(1.0..=1e6).contains(&x) {
            return Err(Error::invalid(format!("norm bound {x} outside [1, 1e6]")));
        }
        let bound_sq = (x * x).floor() as i64;
        Ok(Sl2Ball {
            x,
            shape: Shape::Norm { bound_sq },
            cap: DEFAULT_SL2_CAP,
        })
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    /// Rough element count, used by the budget guard.
    pub fn estimate(&self) -> f64 {
        match self.shape {
            Shape::Bump { reach } => 7.0 * (reach as f64 + 1.0).powi(2),
            Shape::Norm { bound_sq } => 6.0 * bound_sq as f64 + 8.0,
        }
    }

    fn check_cap(&self) -> Result<()> {
        let estimate = self.estimate();
        if estimate > self.cap {
            return Err(Error::Budget {
                estimate,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn row_reach(&self) -> i64 {
        match self.shape {
            Shape::Bump { reach } => reach,
            Shape::Norm { bound_sq } => bound_sq.sqrt(),
        }
    }

    fn visit_rows(&self, c_lo: i64, c_hi: i64, f: &mut impl FnMut(Mat2<i64>)) {
        let r = self.row_reach();
        for c in c_lo..=c_hi {
            for d in -r..=r {
                if c.gcd(&d) != 1 {
                    continue;
                }
                // a₀d − b₀c = 1
                let eg = d.extended_gcd(&c);
                let (a0, b0) = (eg.x, -eg.y);
                match self.shape {
                    Shape::Bump { reach } => {
                        let ra = line_range(a0, c, reach - d.abs());
                        let rb = line_range(b0, d, reach - c.abs());
                        let (lo, hi) = match (ra, rb) {
                            (Some(None), _) | (_, Some(None)) => continue,
                            (Some(Some(x)), Some(Some(y))) => (x.0.max(y.0), x.1.min(y.1)),
                            (Some(Some(x)), None) | (None, Some(Some(x))) => x,
                            (None, None) => unreachable!("c and d are not both zero"),
                        };
                        for k in lo..=hi {
                            f(Mat2::new(a0 + k * c, b0 + k * d, c, d));
                        }
                    }
                    Shape::Norm { bound_sq } => {
                        let rest = bound_sq - c * c - d * d;
                        if rest < 0 {
                            continue;
                        }
                        let n = c * c + d * d;
                        let center = -Integer::div_floor(&(a0 * c + b0 * d), &n);
                        let fits = |k: i64| {
                            let (a, b) = (a0 + k * c, b0 + k * d);
                            a * a + b * b <= rest
                        };
                        let mut lo = center;
                        while fits(lo - 1) {
                            lo -= 1;
                        }
                        let mut hi = center - 1;
                        while fits(hi + 1) {
                            hi += 1;
                        }
                        for k in lo..=hi {
                            f(Mat2::new(a0 + k * c, b0 + k * d, c, d));
                        }
                    }
                }
            }
        }
    }

    pub fn for_each(&self, mut f: impl FnMut(Mat2<i64>)) -> Result<()> {
        self.check_cap()?;
        let r = self.row_reach();
        self.visit_rows(-r, r, &mut f);
        Ok(())
    }

    /// Folds each of a fixed number of bottom-row slices in parallel and
    /// returns the partial results in slice order, so any later reduction is
    /// independent of the thread count.
    pub fn fold_chunks<T, I, F>(&self, init: I, fold: F) -> Result<Vec<T>>
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, Mat2<i64>) + Sync,
    {
        self.check_cap()?;
        let r = self.row_reach();
        let span = 2 * r + 1;
        let step = (span + CHUNKS - 1) / CHUNKS;
        let starts: Vec<i64> = (0..CHUNKS)
            .map(|i| -r + i * step)
            .filter(|&s| s <= r)
            .collect();
        Ok(starts
            .into_par_iter()
            .map(|lo| {
                let mut acc = init();
                self.visit_rows(lo, (lo + step - 1).min(r), &mut |m| fold(&mut acc, m));
                acc
            })
            .collect())
    }

    pub fn count(&self) -> Result<u64> {
        Ok(self.fold_chunks(|| 0u64, |n, _| *n += 1)?.into_iter().sum())
    }

    pub fn collect(&self) -> Result<Vec<Mat2<i64>>> {
        Ok(self
            .fold_chunks(Vec::new, |v, m| v.push(m))?
            .into_iter()
            .flatten()
            .collect())
    }
}

/// Every `ξ ∈ SL₂(ℤ)` on which `φ_X` is nonzero, each once.
pub fn enumerate_sl2_ball(x: f64, phi: &BumpFunction) -> Result<Vec<Mat2<i64>>> {
    Sl2Ball::bump(x, phi)?.collect()
}

/// Every `ξ ∈ SL₂(ℤ)` with `‖ξ‖ ≤ X`.
pub fn enumerate_sl2_norm_ball(x: f64) -> Result<Vec<Mat2<i64>>> {
    Sl2Ball::norm(x)?.collect()
}
