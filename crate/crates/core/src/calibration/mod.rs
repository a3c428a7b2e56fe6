//! Turning a count series into fitted growth parameters.
//!
//! The analytic route (discrete growth rates, their regression on the
//! population level, carrying-capacity bounds, back-solved initial
//! population) seeds the nonlinear least-squares logistic fits.

mod exponential;
mod logistic;
mod nested;
mod rates;

pub use exponential::{
    fit_exponential, fit_exponential_weighted, log_linear_fit, regime_scan, ExpFitResult,
    RegimeScanResult, REGIME_JUMP_THRESHOLD, SCAN_NOISE_FLOOR,
};
pub use logistic::{fit_logistic, fit_logistic_with, LogisticFit, LogisticFitOptions};
pub use nested::{nested_f_test, nested_model_test, NestedModelTest};
pub use rates::{
    capacity_bound, discrete_growth_rates, initial_population, rate_regression, RatePoint,
    RateRegression,
};
