//! The three calibrated growth scenarios and trajectories forecast from them.
//!
//! A scenario set is built in one pass: growth rates are regressed on the
//! population level, the regression yields the carrying capacity with its
//! one-sided 80% and 95% upper bounds plus an analytic initial population,
//! and three least-squares fits follow. The base case frees all three
//! parameters; the high and extreme cases pin the capacity at the 80% and
//! 95% bounds.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::calibration::{
    capacity_bound, discrete_growth_rates, fit_exponential, fit_logistic_with, initial_population,
    nested_model_test, rate_regression, regime_scan, LogisticFit, LogisticFitOptions, NestedModelTest,
    RateRegression, RegimeScanResult,
};
use crate::math;
use crate::models::LogisticParams;
use crate::{ElapsedSeries, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    Base,
    High,
    Extreme,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::Base, ScenarioKind::High, ScenarioKind::Extreme];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Base => "base",
            ScenarioKind::High => "high",
            ScenarioKind::Extreme => "extreme",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOptions {
    /// Confidence levels of the capacity bounds pinned in the high and extreme fits.
    pub high_level: f64,
    pub extreme_level: f64,
    /// Largest omission count of the regime scan (clipped to the data length).
    pub max_omit: usize,
    pub fit: LogisticFitOptions,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self {
            high_level: 0.80,
            extreme_level: 0.95,
            max_omit: 10,
            fit: LogisticFitOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub base: LogisticFit,
    pub high: LogisticFit,
    pub extreme: LogisticFit,
    pub regression: RateRegression,
    /// Capacity bounds pinned in the high and extreme fits.
    pub k_high: f64,
    pub k_extreme: f64,
    /// Analytic starting point: `(mean back-solved P₀, a, −a/b)`.
    pub initial: LogisticParams,
    /// Exponential-vs-logistic F test on the base fit.
    pub nested: Option<NestedModelTest>,
    pub regime: Option<RegimeScanResult>,
    /// Label of the series the scenarios were calibrated on.
    pub provenance: String,
    /// Time of the last observation.
    pub last_t: f64,
}

impl ScenarioSet {
    pub fn get(&self, kind: ScenarioKind) -> &LogisticFit {
        match kind {
            ScenarioKind::Base => &self.base,
            ScenarioKind::High => &self.high,
            ScenarioKind::Extreme => &self.extreme,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (ScenarioKind, &LogisticFit)> {
        ScenarioKind::ALL.into_iter().map(move |k| (k, self.get(k)))
    }

    /// True when the omission scan ran and did not see saturation set in,
    /// i.e. the capacity is only weakly identified by the data.
    pub fn capacity_weakly_identified(&self) -> bool {
        self.regime.as_ref().is_some_and(|r| !r.regime_change_detected)
    }

    pub fn all_converged(&self) -> bool {
        self.iter().all(|(_, f)| f.converged)
    }
}

pub fn build_scenarios(series: &ElapsedSeries) -> Result<ScenarioSet> {
    build_scenarios_with(series, &ScenarioOptions::default())
}

pub fn build_scenarios_with(series: &ElapsedSeries, opts: &ScenarioOptions) -> Result<ScenarioSet> {
    let rates = discrete_growth_rates(series)?;
    let regression = rate_regression(&rates)?;
    let k_high = capacity_bound(&regression, opts.high_level)?;
    let k_extreme = capacity_bound(&regression, opts.extreme_level)?;
    let r = regression.a;
    let k = regression.k_point;
    if !(r > 0.0) {
        return Err(Error::InvalidSeries("rate regression intercept is not positive"));
    }
    let p0 = initial_population(series, r, k)?;
    let initial = LogisticParams::new(p0, r, k)?;

    let base = fit_logistic_with(series, &initial, None, &opts.fit)?;
    let high = fit_logistic_with(series, &initial, Some(k_high), &opts.fit)?;
    let extreme = fit_logistic_with(series, &initial, Some(k_extreme), &opts.fit)?;

    let max_omit = opts.max_omit.min(series.len().saturating_sub(2));
    let regime = if max_omit >= 2 {
        Some(regime_scan(series, max_omit)?)
    } else {
        None
    };
    let nested = match fit_exponential(series) {
        Ok(exp_fit) => nested_model_test(&exp_fit, &base, series.len()).ok(),
        Err(_) => None,
    };

    Ok(ScenarioSet {
        base,
        high,
        extreme,
        regression,
        k_high,
        k_extreme,
        initial,
        nested,
        regime,
        provenance: series.label().into(),
        last_t: series.last().map(|p| p.0).unwrap_or(0.0),
    })
}

/// Sampled logistic curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<(f64, f64)>,
    pub params: LogisticParams,
}

/// Samples the fitted curve at `from_t + j·step`, `j = 1..=⌈horizon/step⌉`.
pub fn forecast(fit: &LogisticFit, from_t: f64, horizon: f64, step: f64) -> Result<Trajectory> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument("forecast horizon must be positive"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument("forecast step must be positive"));
    }
    // guard against 50/0.1 landing on 500.00000000000006
    let steps = math::ceil(horizon / step - 1e-9).max(1.0) as usize;
    let points = (1..=steps)
        .map(|j| {
            let t = from_t + j as f64 * step;
            (t, fit.eval(t))
        })
        .collect();
    Ok(Trajectory {
        points,
        params: fit.params,
    })
}
