//! Adaptive Gauss–Kronrod (7, 15) quadrature over prescribed panels.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

/// Kronrod estimate and its error estimate on `[a, b]`.
fn kronrod(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut pairs = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (lo, hi) = (f(c - dx), f(c + dx));
        pairs[j] = (lo, hi);
        k += (lo + hi) * WGK[j];
        if j % 2 == 1 {
            g += (lo + hi) * WG[j / 2];
        }
    }
    // error scaling as in QUADPACK's qk15
    let mean = k * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        asc += WGK[j] * ((pairs[j].0 - mean).norm() + (pairs[j].1 - mean).norm());
    }
    let asc = asc * h.abs();
    let mut err = ((k - g) * h).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    (k * h, err)
}

fn adapt(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32) -> Result<Complex64> {
    let (k, err) = kronrod(f, a, b);
    if err <= tol {
        return Ok(k);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NonConvergence(format!(
            "quadrature on [{a}, {b}] did not reach {tol:e}"
        )));
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, depth + 1)? + adapt(f, m, b, 0.5 * tol, depth + 1)?)
}

/// `∫ f` over consecutive panels `[p₀, p₁], [p₁, p₂], …` to absolute
/// tolerance `tol`, shared in proportion to panel length.
pub fn integrate_panels(
    f: impl Fn(f64) -> Complex64,
    panels: &[f64],
    tol: f64,
) -> Result<Complex64> {
    if panels.len() < 2 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let span = panels[panels.len() - 1] - panels[0];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for w in panels.windows(2) {
        let v = adapt(&f, w[0], w[1], tol * (w[1] - w[0]) / span, 0)? - comp;
        let t = sum + v;
        comp = (t - sum) - v;
        sum = t;
    }
    Ok(sum)
}

pub fn integrate_real(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let panels: Vec<f64> = (0..=64).map(|i| a + (b - a) * i as f64 / 64.0).collect();
    Ok(integrate_panels(|x| Complex64::new(f(x), 0.0), &panels, tol)?.re)
}
