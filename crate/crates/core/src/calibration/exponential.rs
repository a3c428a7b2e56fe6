use alloc::vec::Vec;

use crate::math;
use crate::models::{fitting_error, relative_residual_sum, weighted_residual_sum, ExponentialParams, Weighting};
use crate::simplex::{self, SimplexOptions};
use crate::{ElapsedSeries, Error, Result};

/// Jump ratio at or above which the omission scan reports a regime change.
pub const REGIME_JUMP_THRESHOLD: f64 = 2.0;

/// Scan errors below this are indistinguishable from a perfect fit.
pub const SCAN_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpFitResult {
    pub params: ExponentialParams,
    /// Mean squared model-relative residual at the optimum.
    pub error: f64,
    /// `Σ (oᵢ − eᵢ)² / eᵢ²` at the optimum (`n_used · error`).
    pub residual_sum: f64,
    pub n_used: usize,
    pub converged: bool,
}

/// Ordinary least squares of `ln value` on `t`.
pub fn log_linear_fit(series: &ElapsedSeries) -> Result<ExponentialParams> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if series.values().any(|v| !(v > 0.0)) {
        return Err(Error::InvalidSeries("non-positive value in log-linear fit"));
    }
    let nf = n as f64;
    let t_mean = series.times().sum::<f64>() / nf;
    let y_mean = series.values().map(math::ln).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (t, v) in series.points() {
        let dx = t - t_mean;
        sxx += dx * dx;
        sxy += dx * (math::ln(*v) - y_mean);
    }
    let r = sxy / sxx;
    ExponentialParams::new(math::exp(y_mean - r * t_mean), r)
}

/// Exponential fit with Pearson-weighted residuals `(o − e)²/e`, seeded by
/// the log-linear fit; the reported error is the model-relative metric.
pub fn fit_exponential(series: &ElapsedSeries) -> Result<ExpFitResult> {
    fit_exponential_weighted(series, Weighting::Pearson)
}

pub fn fit_exponential_weighted(series: &ElapsedSeries, weighting: Weighting) -> Result<ExpFitResult> {
    let start = log_linear_fit(series)?;
    // Pearson sums carry the units of the counts; rescale to keep the
    // simplex tolerances meaningful.
    let scale = match weighting {
        Weighting::ModelRelative => series.len() as f64,
        Weighting::Pearson => series.values().sum::<f64>(),
    };
    let objective = |z: &[f64]| {
        let (ln_p0, r) = (z[0], z[1]);
        weighted_residual_sum(series, |t| math::exp(ln_p0 + r * t), weighting)
            .map(|s| s / scale)
            .unwrap_or(f64::INFINITY)
    };
    let opts = SimplexOptions {
        initial_step: 0.05,
        ..SimplexOptions::default()
    };
    let mut best = simplex::minimize(objective, &[math::ln(start.p0), start.r], &opts);
    // restart at the optimum to shake off a collapsed simplex
    for _ in 0..3 {
        let again = simplex::minimize(objective, &best.x, &opts);
        let improved = again.value < best.value - opts.f_tol;
        best = if again.value <= best.value { again } else { best };
        if !improved {
            break;
        }
    }
    let params = ExponentialParams::new(math::exp(best.x[0]), best.x[1])?;
    let residual_sum = relative_residual_sum(series, |t| params.eval(t))?;
    Ok(ExpFitResult {
        params,
        error: fitting_error(series, |t| params.eval(t))?,
        residual_sum,
        n_used: series.len(),
        converged: best.converged,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeScanResult {
    /// `(omitted, error)` for `omitted = 0..=max_omit`.
    pub errors: Vec<(usize, f64)>,
    /// Median error over omissions `2..=max_omit`.
    pub plateau_level: f64,
    /// Full-data error over the plateau level.
    pub jump_ratio: f64,
    pub regime_change_detected: bool,
    pub all_converged: bool,
}

/// Refits the exponential model with the `k` most recent points removed,
/// `k = 0..=max_omit`, and compares the full-data error with the plateau.
pub fn regime_scan(series: &ElapsedSeries, max_omit: usize) -> Result<RegimeScanResult> {
    if max_omit < 2 {
        return Err(Error::InvalidArgument("regime scan needs max_omit >= 2"));
    }
    if series.len() < max_omit + 2 {
        return Err(Error::InsufficientData {
            needed: max_omit + 2,
            got: series.len(),
        });
    }
    let mut errors = Vec::with_capacity(max_omit + 1);
    let mut all_converged = true;
    for k in 0..=max_omit {
        let fit = fit_exponential(&series.drop_last(k))?;
        all_converged &= fit.converged;
        errors.push((k, fit.error));
    }
    let plateau: Vec<f64> = errors[2..].iter().map(|e| e.1).collect();
    let plateau_level = math::median(&plateau);
    let jump_ratio = errors[0].1.max(SCAN_NOISE_FLOOR) / plateau_level.max(SCAN_NOISE_FLOOR);
    Ok(RegimeScanResult {
        errors,
        plateau_level,
        jump_ratio,
        regime_change_detected: jump_ratio >= REGIME_JUMP_THRESHOLD,
        all_converged,
    })
}
