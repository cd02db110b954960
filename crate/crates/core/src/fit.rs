//! Least-squares fits used for rate extraction and scaling checks.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::FitFailure(format!(
            "length mismatch: {} abscissae, {} ordinates",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::FitFailure("need at least two points".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::FitFailure("non-finite sample".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::FitFailure("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    /// Fitted decay rate (1/s).
    pub rate: f64,
    /// Fitted amplitude at `t = 0`.
    pub amplitude: f64,
    /// R² of the log-linear fit.
    pub r_squared: f64,
}

/// Fits `y(t) - floor = A exp(-rate t)` by linear least squares on the log.
///
/// Samples with `t < skip_before` or a non-positive excess are dropped.
pub fn exponential_decay(t: &[f64], y: &[f64], floor: f64, skip_before: f64) -> Result<DecayFit> {
    let (ts, ls): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(ti, yi)| **ti >= skip_before && **yi - floor > 0.0)
        .map(|(ti, yi)| (*ti, (*yi - floor).ln()))
        .unzip();
    if ts.len() < 3 {
        return Err(Error::FitFailure(format!(
            "only {} usable samples above the floor",
            ts.len()
        )));
    }
    let lf = linear(&ts, &ls)?;
    Ok(DecayFit {
        rate: -lf.slope,
        amplitude: lf.intercept.exp(),
        r_squared: lf.r_squared,
    })
}
