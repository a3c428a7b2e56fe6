use thiserror::Error;

/// Errors raised by the calibration and valuation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("invalid series: {0}")]
    InvalidSeries(&'static str),
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("count {value} outside the model range (0, {capacity}]")]
    OutOfRange { value: f64, capacity: f64 },
    #[error("model value {value} is not positive at t = {t}")]
    NonPositiveModel { t: f64, value: f64 },
    #[error("coincident observation times at t = {0}")]
    CoincidentTimes(f64),
    #[error("no saturation detected: rate regression slope {slope} is not negative")]
    NoSaturation { slope: f64 },
    #[error("capacity bound undefined at level {level}: slope interval crosses zero, no significant saturation")]
    BoundUndefined { level: f64 },
    #[error("singular initial-population inversion at t = {0}")]
    SingularInversion(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
