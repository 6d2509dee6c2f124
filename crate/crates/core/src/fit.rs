//! Least-squares line fits used for growth exponents.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid(
            "a line fit needs at least two matching points",
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - (slope * x + intercept))
        .collect();
    Ok(LineFit {
        slope,
        intercept,
        residuals,
    })
}

/// Fit of `log y` against `log x`; the slope is the growth exponent.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("log-log fit needs positive data"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}
