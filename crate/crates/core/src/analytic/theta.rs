//! Quadratic theta sums `G_X(θ; λ) = Σ_x φ(x/X) e(θx² + λx)` and the pieces
//! of their Poisson decomposition at `θ = a/r + β`:
//!
//! ```text
//! G_X(a/r + β; λ) = Σ_k S_r(a; k) · J_X(β; λ − k/r),
//! S_r(a; k) = (1/r) Σ_{y mod r} e_r(ay² + ky),
//! J_X(β; z) = ∫ φ(x/X) e(βx² + zx) dx.
//! ```

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use super::bump::BumpFunction;
use super::quad::integrate_panels;
use crate::error::{Error, Result};

const MIN_PANELS: usize = 64;
const MAX_PANELS: f64 = 5e7;

fn e(frac: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * frac)
}

/// Compensated complex sum.
#[derive(Default)]
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

/// `S_r(a; k)`, with every angle reduced mod `r` in integers first.
pub fn gauss_sum_sr(r: u64, a: i64, k: i64) -> Result<Complex64> {
    if r == 0 {
        return Err(Error::invalid("modulus r must be positive"));
    }
    if a.gcd(&(r as i64)) != 1 {
        return Err(Error::invalid(format!("gcd({a}, {r}) ≠ 1")));
    }
    let ri = r as i128;
    let (a, k) = ((a as i128).rem_euclid(ri), (k as i128).rem_euclid(ri));
    let mut acc = Kahan::default();
    for y in 0..ri {
        let n = (a * y % ri * y + k * y) % ri;
        acc.add(e(n as f64 / r as f64));
    }
    Ok(acc.sum / r as f64)
}

/// `G_X(θ; λ)` by direct summation over the support of `φ(x/X)`.
pub fn theta_sum_gx(x: f64, theta: f64, lambda: f64, phi: &BumpFunction) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::invalid(format!("X = {x} below 1")));
    }
    let (table, reach) = phi.table(x);
    let mut acc = Kahan::default();
    for n in -reach..=reach {
        let w = table[(n + reach) as usize];
        if w == 0.0 {
            continue;
        }
        let nf = n as f64;
        acc.add(e((theta * nf * nf).fract() + (lambda * nf).fract()) * w);
    }
    Ok(acc.sum)
}

/// `G_X(a/r + β; λ)`, with the rational part of the phase reduced exactly.
pub fn theta_sum_gx_rational(
    x: f64,
    a: i64,
    r: u64,
    beta: f64,
    lambda: f64,
    phi: &BumpFunction,
) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::invalid(format!("X = {x} below 1")));
    }
    if r == 0 {
        return Err(Error::invalid("modulus r must be positive"));
    }
    let (table, reach) = phi.table(x);
    let ri = r as i128;
    let ar = (a as i128).rem_euclid(ri);
    let mut acc = Kahan::default();
    for n in -reach..=reach {
        let w = table[(n + reach) as usize];
        if w == 0.0 {
            continue;
        }
        let nn = n as i128;
        let rational = (ar * nn % ri * nn).rem_euclid(ri) as f64 / r as f64;
        let nf = n as f64;
        acc.add(e(rational + (beta * nf * nf).fract() + (lambda * nf).fract()) * w);
    }
    Ok(acc.sum)
}

/// `Σ_x φ(x/X)`, the trivial bound for every `|G_X|`.
pub fn theta_mass(x: f64, phi: &BumpFunction) -> f64 {
    phi.table(x).0.iter().sum()
}

/// `J_X(β; z)` to absolute tolerance `10⁻⁸·X`.
///
/// Since `φ` is even, the odd part of `e(zx)` integrates to zero and
/// `J_X(β; z) = 2 ∫₀^{WX} φ(x/X) e(βx²) cos(2πzx) dx`. In the variable
/// `u = x/X` the panels are laid out so each covers about one cycle of the
/// faster of the two oscillations.
pub fn oscillatory_jx(x: f64, beta: f64, z: f64, phi: &BumpFunction) -> Result<Complex64> {
    if !(x > 0.0 && beta.is_finite() && z.is_finite()) {
        return Err(Error::invalid(format!(
            "bad arguments X = {x}, β = {beta}, z = {z}"
        )));
    }
    let w = phi.width;
    let bx = beta * x * x;
    let zx = z * x;
    // cycles per unit u at u, taking the larger of |2βX²u ± zX|
    let freq = |u: f64| (2.0 * bx * u).abs() + zx.abs();
    let cycles = bx.abs() * w * w + zx.abs() * w;
    if cycles > MAX_PANELS {
        return Err(Error::Budget {
            estimate: cycles,
            cap: MAX_PANELS,
        });
    }
    let hmax = w / MIN_PANELS as f64;
    let mut panels = vec![0.0];
    let mut u = 0.0;
    while u < w {
        let f = freq(u);
        let h = if f > 0.0 { hmax.min(1.0 / f) } else { hmax };
        u = (u + h).min(w);
        panels.push(u);
    }
    let wave = |u: f64| phi.eval(u) * (TAU * (zx * u).fract()).cos();
    let tol = 1e-8 * x / (2.0 * x);
    let j = if bx == 0.0 {
        integrate_panels(|u| Complex64::new(wave(u), 0.0), &panels, tol)?
    } else {
        integrate_panels(|u| e((bx * u * u).fract()) * wave(u), &panels, tol)?
    };
    Ok(j * (2.0 * x))
}

/// `J_X(β; ·)` memoized on `|z|`, since `J_X` is even in `z`.
struct JTable<'a> {
    x: f64,
    beta: f64,
    phi: &'a BumpFunction,
    seen: HashMap<u64, Complex64>,
}

impl<'a> JTable<'a> {
    fn new(x: f64, beta: f64, phi: &'a BumpFunction) -> Self {
        JTable {
            x,
            beta,
            phi,
            seen: HashMap::new(),
        }
    }

    fn get(&mut self, z: f64) -> Result<Complex64> {
        let key = z.abs().to_bits();
        if let Some(j) = self.seen.get(&key) {
            return Ok(*j);
        }
        let j = oscillatory_jx(self.x, self.beta, z.abs(), self.phi)?;
        self.seen.insert(key, j);
        Ok(j)
    }
}

fn poisson_with(table: &mut JTable, a: i64, r: u64, lambda: f64, k_max: i64) -> Result<Complex64> {
    let mut acc = Kahan::default();
    for k in -k_max..=k_max {
        let s = gauss_sum_sr(r, a, k)?;
        acc.add(s * table.get(lambda - k as f64 / r as f64)?);
    }
    Ok(acc.sum)
}

/// `Σ_{|k| ≤ K} S_r(a; k) · J_X(β; λ − k/r)`.
pub fn poisson_side(
    x: f64,
    a: i64,
    r: u64,
    beta: f64,
    lambda: f64,
    k_max: i64,
    phi: &BumpFunction,
) -> Result<Complex64> {
    poisson_with(&mut JTable::new(x, beta, phi), a, r, lambda, k_max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaBreak {
    pub x: f64,
    pub a: i64,
    pub r: u64,
    pub lambda: f64,
    pub k_max: i64,
    pub direct_re: f64,
    pub direct_im: f64,
    pub poisson_re: f64,
    pub poisson_im: f64,
    /// `Σ_x φ(x/X)`.
    pub mass: f64,
    /// `|direct − poisson| / mass`.
    pub rel_err: f64,
}

fn break_row(
    x: f64,
    a: i64,
    r: u64,
    lambda: f64,
    k_max: i64,
    table: &mut JTable,
) -> Result<ThetaBreak> {
    let g = theta_sum_gx_rational(x, a, r, 0.0, lambda, table.phi)?;
    let p = poisson_with(table, a, r, lambda, k_max)?;
    let mass = theta_mass(x, table.phi);
    Ok(ThetaBreak {
        x,
        a,
        r,
        lambda,
        k_max,
        direct_re: g.re,
        direct_im: g.im,
        poisson_re: p.re,
        poisson_im: p.im,
        mass,
        rel_err: (g - p).norm() / mass,
    })
}

/// Both sides of the decomposition at `θ = a/r` (`β = 0`).
pub fn theta_break_check(
    x: f64,
    a: i64,
    r: u64,
    lambda: f64,
    k_max: i64,
    phi: &BumpFunction,
) -> Result<ThetaBreak> {
    break_row(x, a, r, lambda, k_max, &mut JTable::new(x, 0.0, phi))
}

/// [`theta_break_check`] for every `0 < a < r` coprime to `r` and every `λ`,
/// sharing the `J_X` values between numerators.
pub fn theta_break_sweep(
    x: f64,
    r: u64,
    lambdas: &[f64],
    k_max: i64,
    phi: &BumpFunction,
) -> Result<Vec<ThetaBreak>> {
    if r == 0 {
        return Err(Error::invalid("r must be positive"));
    }
    let units: Vec<i64> = if r == 1 {
        vec![0]
    } else {
        (1..r as i64).filter(|a| a.gcd(&(r as i64)) == 1).collect()
    };
    let mut table = JTable::new(x, 0.0, phi);
    let mut out = Vec::new();
    for &lambda in lambdas {
        for &a in &units {
            out.push(break_row(x, a, r, lambda, k_max, &mut table)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sum_examples() {
        assert!((gauss_sum_sr(1, 0, 0).unwrap() - 1.0).norm() < 1e-15);
        assert!((gauss_sum_sr(3, 1, 0).unwrap().norm() - 3f64.powf(-0.5)).abs() < 1e-12);
        assert!((gauss_sum_sr(2, 1, 1).unwrap() - 1.0).norm() < 1e-15);
        assert!(gauss_sum_sr(6, 4, 0).is_err());
        for r in [5u64, 7, 11, 13] {
            for a in 1..r as i64 {
                let s = gauss_sum_sr(r, a, 0).unwrap();
                assert!((s.norm() - (r as f64).powf(-0.5)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gauss_sum_shift() {
        // completing the square: S_r(a; 2ab) = e_r(−ab²) S_r(a; 0) for odd r
        let (r, a, b) = (9u64, 2i64, 4i64);
        let lhs = gauss_sum_sr(r, a, 2 * a * b).unwrap();
        let rhs = e(-((a * b * b) % r as i64) as f64 / r as f64) * gauss_sum_sr(r, a, 0).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn theta_without_oscillation() {
        let phi = BumpFunction::default();
        let mass = phi.integral();
        for x in [100.0, 300.0] {
            let g = theta_sum_gx(x, 0.0, 0.0, &phi).unwrap();
            assert!(g.im == 0.0);
            assert!((g.re / (x * mass) - 1.0).abs() < 0.01);
        }
        // n(n+1)/2 is an integer, so every phase vanishes and the bound is attained
        let g = theta_sum_gx(50.0, 0.5, 0.5, &phi).unwrap();
        let mass = theta_mass(50.0, &phi);
        assert!(g.norm() <= mass * (1.0 + 1e-12));
        assert!((g.re - mass).abs() < 1e-9 * mass);
    }

    #[test]
    fn rational_phase_agrees() {
        let phi = BumpFunction::default();
        let a = theta_sum_gx(5.0, 1.0 / 3.0, 0.2, &phi).unwrap();
        let b = theta_sum_gx_rational(5.0, 1, 3, 0.0, 0.2, &phi).unwrap();
        assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn oscillatory_integral() {
        let phi = BumpFunction::default();
        let x = 10.0;
        let j0 = oscillatory_jx(x, 0.0, 0.0, &phi).unwrap();
        assert!((j0.re - x * phi.integral()).abs() < 1e-7 * x && j0.im.abs() < 1e-12);
        let j1 = oscillatory_jx(x, 0.0, 1.0, &phi).unwrap().norm();
        let j10 = oscillatory_jx(x, 0.0, 10.0, &phi).unwrap().norm();
        assert!(j10 < j1 || j1 < 1e-7 * x);
        assert!(oscillatory_jx(x, 0.0, 0.05, &phi).unwrap().norm() > j1);
    }

    #[test]
    fn small_break_identity() {
        let phi = BumpFunction::default();
        for (a, r) in [(1, 2), (1, 3), (2, 5)] {
            let c = theta_break_check(3.0, a, r, 0.0, 20, &phi).unwrap();
            assert!(c.rel_err < 1e-6, "{c:?}");
        }
    }
}
