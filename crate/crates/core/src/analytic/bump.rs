use serde::Serialize;

use crate::arith::Mat2;
use crate::error::{Error, Result};

/// Smooth even bump `φ(t) = C·exp(1 − 1/(1 − (t/W)²))` on `|t| < W`, zero
/// outside, with `C` chosen so that `φ(plateau) = 1`. Since `φ` decreases in
/// `|t|`, it is at least 1 on `[−plateau, plateau]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpFunction {
    pub width: f64,
    pub plateau: f64,
    scale: f64,
}

impl Default for BumpFunction {
    fn default() -> Self {
        BumpFunction::new(20.0, 10.0).expect("valid default bump")
    }
}

impl BumpFunction {
    pub fn new(width: f64, plateau: f64) -> Result<Self> {
        if !(plateau > 0.0 && width > plateau && width.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < plateau < width, got {plateau} and {width}"
            )));
        }
        let u = plateau / width;
        let scale = (1.0 / (1.0 - u * u) - 1.0).exp();
        Ok(BumpFunction {
            width,
            plateau,
            scale,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = t / self.width;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        self.scale * (1.0 - 1.0 / (1.0 - u * u)).exp()
    }

    /// `∫ φ`, by composite Gauss–Kronrod on the support.
    pub fn integral(&self) -> f64 {
        let w = self.width;
        super::quad::integrate_real(|t| self.eval(t), -w, w, 1e-13 * w).unwrap_or(f64::NAN)
    }

    /// `φ_X(ξ) = φ((a+d)/X) φ((a−d)/X) φ((b+c)/X) φ((b−c)/X)`.
    pub fn weight(&self, x: f64, m: &Mat2<i64>) -> f64 {
        let f = |v: i64| self.eval(v as f64 / x);
        f(m.a + m.d) * f(m.a - m.d) * f(m.b + m.c) * f(m.b - m.c)
    }

    /// Values `φ(k/X)` for integers `|k| < W·X`, indexed by `k + offset`.
    pub fn table(&self, x: f64) -> (Vec<f64>, i64) {
        let reach = (self.width * x).ceil() as i64;
        let values = (-reach..=reach).map(|k| self.eval(k as f64 / x)).collect();
        (values, reach)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let phi = BumpFunction::default();
        assert!((phi.eval(10.0) - 1.0).abs() < 1e-15);
        assert!((phi.eval(-10.0) - 1.0).abs() < 1e-15);
        for k in 0..=1000 {
            let t = k as f64 / 50.0;
            assert_eq!(phi.eval(t), phi.eval(-t));
            if t <= 10.0 {
                assert!(phi.eval(t) >= 1.0 - 1e-15);
            }
            if t >= 20.0 {
                assert_eq!(phi.eval(t), 0.0);
            }
        }
        assert!(BumpFunction::new(5.0, 10.0).is_err());
        let mass = phi.integral();
        assert!(mass > 20.0 && mass < 40.0, "{mass}");
    }
}
