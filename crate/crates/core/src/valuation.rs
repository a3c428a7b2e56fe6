//! Present values of forecast user bases.
//!
//! Cash flows are yearly and discrete: the cash flow of year `y` is the
//! forecast population at `from_t + y` times the profit per user, discounted
//! by `(1 + d)^y`. All profit is distributed and there is no terminal value.

use alloc::vec::Vec;

use crate::calibration::{log_linear_fit, LogisticFit};
use crate::math;
use crate::models::ExponentialParams;
use crate::scenario::{ScenarioKind, ScenarioSet};
use crate::{ElapsedSeries, Error, Result};

pub const DEFAULT_HORIZON_YEARS: u32 = 50;

/// Judgment-based valuation inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftNumbers {
    pub discount_rate: f64,
    pub profit_margin: f64,
    /// USD of revenue per user per year.
    pub revenue_per_user: f64,
    pub horizon_years: u32,
}

impl SoftNumbers {
    pub fn new(discount_rate: f64, profit_margin: f64, revenue_per_user: f64, horizon_years: u32) -> Result<Self> {
        if !(discount_rate > 0.0 && discount_rate.is_finite()) {
            return Err(Error::InvalidArgument("discount rate must be positive"));
        }
        if !(profit_margin >= 0.0 && profit_margin <= 1.0) {
            return Err(Error::InvalidArgument("profit margin must lie in [0, 1]"));
        }
        if !(revenue_per_user > 0.0 && revenue_per_user.is_finite()) {
            return Err(Error::InvalidArgument("revenue per user must be positive"));
        }
        if horizon_years < 1 {
            return Err(Error::InvalidArgument("horizon must be at least one year"));
        }
        Ok(Self {
            discount_rate,
            profit_margin,
            revenue_per_user,
            horizon_years,
        })
    }

    /// Distributed profit per user per year.
    pub fn profit_per_user(&self) -> f64 {
        self.profit_margin * self.revenue_per_user
    }
}

/// `(1 − (1 + d)^−n) / d`: present value of `n` unit yearly payments.
pub fn annuity_factor(discount: f64, years: u32) -> f64 {
    (1.0 - math::powi(1.0 + discount, -(years as i32))) / discount
}

/// Present value of one dollar per forecast user per year.
pub fn normalized_value(fit: &LogisticFit, from_t: f64, discount: f64, horizon: u32) -> Result<f64> {
    if !(discount > 0.0 && discount.is_finite()) {
        return Err(Error::InvalidArgument("discount rate must be positive"));
    }
    let growth = 1.0 + discount;
    let mut factor = 1.0;
    let mut pv = 0.0;
    for y in 1..=horizon {
        factor /= growth;
        pv += fit.eval(from_t + f64::from(y)) * factor;
    }
    Ok(pv)
}

/// One value per scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioValues {
    pub base: f64,
    pub high: f64,
    pub extreme: f64,
}

impl ScenarioValues {
    pub fn get(&self, kind: ScenarioKind) -> f64 {
        match kind {
            ScenarioKind::Base => self.base,
            ScenarioKind::High => self.high,
            ScenarioKind::Extreme => self.extreme,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (ScenarioKind, f64)> + '_ {
        ScenarioKind::ALL.into_iter().map(move |k| (k, self.get(k)))
    }

    fn try_from_fn(mut f: impl FnMut(ScenarioKind) -> Result<f64>) -> Result<Self> {
        Ok(Self {
            base: f(ScenarioKind::Base)?,
            high: f(ScenarioKind::High)?,
            extreme: f(ScenarioKind::Extreme)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationRow {
    pub discount: f64,
    pub values: ScenarioValues,
}

/// Normalized values for every discount rate, rows in input order.
pub fn valuation_table(scenarios: &ScenarioSet, from_t: f64, discounts: &[f64], horizon: u32) -> Result<Vec<ValuationRow>> {
    if discounts.is_empty() {
        return Err(Error::InvalidArgument("no discount rates given"));
    }
    discounts
        .iter()
        .map(|&d| {
            let values = ScenarioValues::try_from_fn(|k| normalized_value(scenarios.get(k), from_t, d, horizon))?;
            Ok(ValuationRow { discount: d, values })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationResult {
    pub per_scenario: ScenarioValues,
    pub soft: SoftNumbers,
    pub normalized: bool,
}

/// Company value per scenario: profit per user times the normalized value.
pub fn value_company(scenarios: &ScenarioSet, from_t: f64, soft: &SoftNumbers) -> Result<ValuationResult> {
    let ppu = soft.profit_per_user();
    let per_scenario = ScenarioValues::try_from_fn(|k| {
        Ok(ppu * normalized_value(scenarios.get(k), from_t, soft.discount_rate, soft.horizon_years)?)
    })?;
    Ok(ValuationResult {
        per_scenario,
        soft: *soft,
        normalized: false,
    })
}

/// Sensitivity variant of [`value_company`]: revenue per user follows the
/// trend ratio at the company's age in each cash-flow year instead of the
/// flat `soft.revenue_per_user`.
pub fn value_company_with_decay(
    scenarios: &ScenarioSet,
    from_t: f64,
    soft: &SoftNumbers,
    trends: &TrendPair,
    age_at_from_t: f64,
) -> Result<ValuationResult> {
    let growth = 1.0 + soft.discount_rate;
    let per_scenario = ScenarioValues::try_from_fn(|k| {
        let fit = scenarios.get(k);
        let mut factor = 1.0;
        let mut pv = 0.0;
        for y in 1..=soft.horizon_years {
            let y = f64::from(y);
            factor /= growth;
            let rpu = revenue_per_user(trends, age_at_from_t + y);
            pv += fit.eval(from_t + y) * soft.profit_margin * rpu * factor;
        }
        Ok(pv)
    })?;
    Ok(ValuationResult {
        per_scenario,
        soft: *soft,
        normalized: false,
    })
}

/// Log-linear exponential trend (level at the epoch, yearly rate).
pub fn fit_trend(series: &ElapsedSeries) -> Result<ExponentialParams> {
    log_linear_fit(series)
}

/// Exponential trends of revenue (USD/year) and users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendPair {
    pub revenue_trend: ExponentialParams,
    pub user_trend: ExponentialParams,
}

impl TrendPair {
    /// Yearly rate at which revenue per user shrinks (negative when it grows).
    pub fn decay_rate(&self) -> f64 {
        self.user_trend.r - self.revenue_trend.r
    }

    /// Years for revenue per user to halve; `None` when it does not decay.
    pub fn half_life(&self) -> Option<f64> {
        let rate = self.decay_rate();
        (rate > 0.0).then(|| core::f64::consts::LN_2 / rate)
    }
}

/// Revenue per user per year `dt` years after the epoch.
pub fn revenue_per_user(trends: &TrendPair, dt: f64) -> f64 {
    let level = trends.revenue_trend.p0 / trends.user_trend.p0;
    level * math::exp((trends.revenue_trend.r - trends.user_trend.r) * dt)
}

/// Mean revenue per user over the last `window` whole years of a company
/// aged `age_years`: `dt ∈ {age, age − 1, …, age − window + 1}`.
pub fn avg_revenue_per_user(trends: &TrendPair, age_years: f64, window: u32) -> Result<f64> {
    if window < 1 {
        return Err(Error::InvalidArgument("averaging window must be at least one year"));
    }
    if !(age_years >= f64::from(window)) {
        return Err(Error::InvalidArgument("averaging window exceeds the company age"));
    }
    let sum: f64 = (0..window)
        .map(|i| revenue_per_user(trends, age_years - f64::from(i)))
        .sum();
    Ok(sum / f64::from(window))
}

/// Least-squares slope through the origin of revenue on customers.
pub fn linear_revenue_fit(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all customer counts are zero"));
    }
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    Ok(sxy / sxx)
}

/// Yearly revenue once the customer base sits at its ceiling `k`.
pub fn steady_state_revenue(k: f64, slope: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument("customer ceiling must be positive"));
    }
    if !(slope >= 0.0) {
        return Err(Error::InvalidArgument("revenue per customer must be non-negative"));
    }
    Ok(k * slope)
}
