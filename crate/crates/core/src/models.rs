//! Closed-form exponential and logistic growth curves and the relative
//! fitting-error metric used to score them against observations.

use crate::math;
use crate::{ElapsedSeries, Error, Result};

/// Number of free parameters of the logistic curve `(p0, r, k)`.
pub const LOGISTIC_PARAM_COUNT: usize = 3;

/// Pure proportional growth `p0 · e^(r·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialParams {
    pub p0: f64,
    pub r: f64,
}

impl ExponentialParams {
    pub fn new(p0: f64, r: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0.is_finite()) {
            return Err(Error::InvalidParams("exponential p0 must be positive and finite"));
        }
        if !r.is_finite() {
            return Err(Error::InvalidParams("exponential rate must be finite"));
        }
        Ok(Self { p0, r })
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        exp_eval(self, t)
    }
}

/// Logistic growth: initial population `p0`, initial rate `r`, carrying capacity `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    pub p0: f64,
    pub r: f64,
    pub k: f64,
}

impl LogisticParams {
    pub fn new(p0: f64, r: f64, k: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0.is_finite()) {
            return Err(Error::InvalidParams("logistic p0 must be positive and finite"));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParams("logistic carrying capacity must be positive"));
        }
        if p0 >= k {
            return Err(Error::InvalidParams("logistic p0 must be below the carrying capacity"));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParams("logistic rate must be positive"));
        }
        Ok(Self { p0, r, k })
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        logistic_eval(self, t)
    }
}

#[inline]
pub fn exp_eval(params: &ExponentialParams, t: f64) -> f64 {
    params.p0 * math::exp(params.r * t)
}

/// `K·P₀·e^{rt} / (K + P₀(e^{rt} − 1))`, evaluated so that it neither
/// overflows for large `r·t` nor loses the `t = 0` identity.
pub fn logistic_eval(params: &LogisticParams, t: f64) -> f64 {
    let LogisticParams { p0, r, k } = *params;
    let rt = r * t;
    if rt > 0.0 {
        k / (1.0 + ((k - p0) / p0) * math::exp(-rt))
    } else {
        let g = math::exp(rt);
        k * p0 * g / (k + p0 * (g - 1.0))
    }
}

/// Per-capita growth rate `r·(1 − p/K)` at population `p`.
pub fn logistic_rate(params: &LogisticParams, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= params.k) {
        return Err(Error::OutOfRange {
            value: p,
            capacity: params.k,
        });
    }
    Ok(params.r * (1.0 - p / params.k))
}

/// Right-hand side of `dP/dt = r·P·(1 − P/K)`.
#[inline]
pub fn logistic_ode_rhs(params: &LogisticParams, p: f64) -> f64 {
    params.r * p * (1.0 - p / params.k)
}

/// Weighting applied to squared residuals when a curve is fitted.
///
/// The reported fitting error is always the model-relative metric; the
/// weighting only selects which objective the optimizer minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// `(o − e)² / e²`, the fitting-error metric itself.
    #[default]
    ModelRelative,
    /// `(o − e)² / e`, Pearson's chi-square weighting.
    Pearson,
}

impl Weighting {
    #[inline]
    pub fn term(self, observed: f64, expected: f64) -> f64 {
        let d = observed - expected;
        match self {
            Weighting::ModelRelative => d * d / (expected * expected),
            Weighting::Pearson => d * d / expected,
        }
    }
}

/// Sum of `(oᵢ − eᵢ)² / eᵢ²` over the series.
pub fn relative_residual_sum<F>(observed: &ElapsedSeries, model: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    weighted_residual_sum(observed, model, Weighting::ModelRelative)
}

pub fn weighted_residual_sum<F>(observed: &ElapsedSeries, model: F, weighting: Weighting) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut sum = 0.0;
    for &(t, o) in observed.points() {
        let e = model(t);
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::NonPositiveModel { t, value: e });
        }
        sum += weighting.term(o, e);
    }
    Ok(sum)
}

/// Mean squared relative residual `(1/n)·Σ (oᵢ − eᵢ)² / eᵢ²` with `n` the
/// number of observations.
pub fn fitting_error<F>(observed: &ElapsedSeries, model: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    fitting_error_df(observed, model, observed.len())
}

/// Same metric with an explicit divisor, e.g. points minus fitted parameters.
pub fn fitting_error_df<F>(observed: &ElapsedSeries, model: F, df: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if observed.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if df == 0 {
        return Err(Error::InvalidArgument("fitting error needs at least one degree of freedom"));
    }
    Ok(relative_residual_sum(observed, model)? / df as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn lp(p0: f64, r: f64, k: f64) -> LogisticParams {
        LogisticParams::new(p0, r, k).unwrap()
    }

    #[test]
    fn exp_eval_examples() {
        assert_eq!(exp_eval(&ExponentialParams::new(5.0, 0.0).unwrap(), 7.0), 5.0);
        let doubling = ExponentialParams::new(1.0, core::f64::consts::LN_2).unwrap();
        assert_relative_eq!(exp_eval(&doubling, 3.0), 8.0, max_relative = 1e-12);
        // 7.6e6 · e^(0.84 · 7.5) = 7.6e6 · e^6.3
        let trend = ExponentialParams::new(7.6e6, 0.84).unwrap();
        assert_relative_eq!(exp_eval(&trend, 7.5), 7.6e6 * 544.571_910_125_929_7, max_relative = 1e-12);
    }

    #[test]
    fn logistic_eval_examples() {
        assert_eq!(logistic_eval(&lp(50.0, 3.0, 100.0), 0.0), 50.0);
        assert_relative_eq!(logistic_eval(&lp(10.0, 1.0, 100.0), 1e6), 100.0);
        assert!(logistic_eval(&lp(10.0, 1.0, 100.0), 1e6).is_finite());
        let e = core::f64::consts::E;
        let hand = 1000.0 * e / (100.0 + 10.0 * (e - 1.0));
        assert_relative_eq!(logistic_eval(&lp(10.0, 1.0, 100.0), 1.0), hand, max_relative = 1e-14);
        assert_relative_eq!(hand, 23.196, max_relative = 1e-4);
    }

    #[test]
    fn logistic_eval_negative_time_and_extremes() {
        let p = lp(10.0, 1.0, 100.0);
        assert!(logistic_eval(&p, -1e4) >= 0.0);
        assert!(logistic_eval(&p, -2.0) < 10.0);
        assert_relative_eq!(logistic_eval(&p, 800.0), 100.0);
    }

    #[test]
    fn logistic_rate_examples() {
        let p = lp(1.0, 1.4, 0.81e9);
        assert_eq!(logistic_rate(&p, 0.81e9).unwrap(), 0.0);
        assert_relative_eq!(logistic_rate(&p, 1e-300).unwrap(), 1.4);
        assert_relative_eq!(logistic_rate(&p, 0.405e9).unwrap(), 0.70, max_relative = 1e-12);
        assert!(matches!(logistic_rate(&p, 0.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(logistic_rate(&p, 1e10), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn ode_rhs_examples() {
        let p = lp(1.0, 1.0, 100.0);
        assert_eq!(logistic_ode_rhs(&p, 0.0), 0.0);
        assert_eq!(logistic_ode_rhs(&p, 100.0), 0.0);
        assert_eq!(logistic_ode_rhs(&p, 50.0), 25.0);
    }

    #[test]
    fn fitting_error_examples() {
        let s = ElapsedSeries::new("x", vec![(0.0, 1.0), (1.0, 2.0), (2.0, 4.0)]).unwrap();
        let exact = ExponentialParams::new(1.0, core::f64::consts::LN_2).unwrap();
        assert!(fitting_error(&s, |t| exact.eval(t)).unwrap() < 1e-28);

        let one = ElapsedSeries::new("x", vec![(0.0, 2.0)]).unwrap();
        assert_eq!(fitting_error(&one, |_| 1.0).unwrap(), 1.0);
        assert_eq!(fitting_error_df(&one, |_| 1.0, 1).unwrap(), 1.0);
    }

    #[test]
    fn fitting_error_rejects_nonpositive_model() {
        let s = ElapsedSeries::new("x", vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert!(matches!(fitting_error(&s, |t| 1.0 - t), Err(Error::NonPositiveModel { .. })));
        let empty = ElapsedSeries::new("x", vec![]).unwrap();
        assert!(fitting_error(&empty, |_| 1.0).is_err());
    }

    #[test]
    fn pearson_weighting() {
        assert_eq!(Weighting::Pearson.term(3.0, 2.0), 0.5);
        assert_eq!(Weighting::ModelRelative.term(3.0, 2.0), 0.25);
    }

    #[test]
    fn params_validation() {
        assert!(LogisticParams::new(10.0, 1.0, 10.0).is_err());
        assert!(LogisticParams::new(0.0, 1.0, 10.0).is_err());
        assert!(LogisticParams::new(1.0, -1.0, 10.0).is_err());
        assert!(ExponentialParams::new(-1.0, 1.0).is_err());
        assert!(ExponentialParams::new(1.0, f64::NAN).is_err());
    }
}
