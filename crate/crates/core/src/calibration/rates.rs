use alloc::vec::Vec;

use crate::dist::student_t_quantile;
use crate::math;
use crate::{ElapsedSeries, Error, Result};

/// One discrete growth-rate observation: `y = ln(Pᵢ/Pᵢ₋₁)/(tᵢ − tᵢ₋₁)`
/// against the interval midpoint level `x = (Pᵢ + Pᵢ₋₁)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub x: f64,
    pub y: f64,
}

pub fn discrete_growth_rates(series: &ElapsedSeries) -> Result<Vec<RatePoint>> {
    if series.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: series.len(),
        });
    }
    if series.values().any(|v| !(v > 0.0)) {
        return Err(Error::InvalidSeries("growth rates need positive counts"));
    }
    series
        .points()
        .windows(2)
        .map(|w| {
            let ((t0, p0), (t1, p1)) = (w[0], w[1]);
            let dt = t1 - t0;
            if !(dt > 0.0) {
                return Err(Error::CoincidentTimes(t1));
            }
            Ok(RatePoint {
                x: 0.5 * (p0 + p1),
                y: math::ln(p1 / p0) / dt,
            })
        })
        .collect()
}

/// Straight-line fit `y = a + b·x` of growth rate on population level.
///
/// With the midpoint abscissa, `a` estimates the initial rate `r` and
/// `−a/b` the carrying capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRegression {
    pub a: f64,
    pub b: f64,
    pub se_a: f64,
    pub se_b: f64,
    pub n_pairs: usize,
    pub k_point: f64,
    /// Residual variance `SSE / (n − 2)`.
    pub residual_variance: f64,
}

impl RateRegression {
    pub fn degrees_of_freedom(&self) -> f64 {
        (self.n_pairs - 2) as f64
    }
}

pub fn rate_regression(points: &[RatePoint]) -> Result<RateRegression> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let nf = n as f64;
    let x_mean = points.iter().map(|p| p.x).sum::<f64>() / nf;
    let y_mean = points.iter().map(|p| p.y).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for p in points {
        let dx = p.x - x_mean;
        sxx += dx * dx;
        sxy += dx * (p.y - y_mean);
    }
    if !(sxx > 0.0) {
        return Err(Error::InvalidSeries("rate regression needs distinct levels"));
    }
    let b = sxy / sxx;
    let a = y_mean - b * x_mean;
    // a slope whose effect across the sampled levels is round-off is zero
    let span = points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let y_scale = points.iter().map(|p| p.y.abs()).fold(0.0, f64::max);
    if !(b * span < -1e-12 * y_scale) {
        return Err(Error::NoSaturation { slope: b });
    }
    let sse: f64 = points
        .iter()
        .map(|p| {
            let r = p.y - (a + b * p.x);
            r * r
        })
        .sum();
    let s2 = sse / (nf - 2.0);
    Ok(RateRegression {
        a,
        b,
        se_a: math::sqrt(s2 * (1.0 / nf + x_mean * x_mean / sxx)),
        se_b: math::sqrt(s2 / sxx),
        n_pairs: n,
        k_point: -a / b,
        residual_variance: s2,
    })
}

/// One-sided upper confidence bound on the carrying capacity: the slope is
/// moved toward zero by `t_level · se_b` with the intercept held fixed.
pub fn capacity_bound(reg: &RateRegression, level: f64) -> Result<f64> {
    if !(level > 0.5 && level < 1.0) {
        return Err(Error::InvalidArgument("confidence level must lie in (0.5, 1)"));
    }
    if !(reg.b < 0.0) {
        return Err(Error::NoSaturation { slope: reg.b });
    }
    if reg.n_pairs < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: reg.n_pairs,
        });
    }
    let t = student_t_quantile(level, reg.degrees_of_freedom());
    let b_level = reg.b + t * reg.se_b;
    if !(b_level < 0.0) {
        return Err(Error::BoundUndefined { level });
    }
    Ok(-reg.a / b_level)
}

/// Mean over observations of the initial population implied by each point
/// under a logistic curve with rate `r` and capacity `k`.
pub fn initial_population(series: &ElapsedSeries, r: f64, k: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("initial population needs a positive rate"));
    }
    if !(k > series.max_value()) {
        return Err(Error::InvalidArgument("carrying capacity must exceed every observation"));
    }
    let mut sum = 0.0;
    for &(t, p) in series.points() {
        // −P·K / (P(e^{rt} − 1) − K·e^{rt}), divided through by e^{rt}
        let decay = math::exp(-r * t);
        let growth = -math::expm1(-r * t);
        let den = p * growth - k;
        let scale = (p * growth).abs() + k;
        if den.abs() <= 1e-12 * scale {
            return Err(Error::SingularInversion(t));
        }
        sum += -p * k * decay / den;
    }
    Ok(sum / series.len() as f64)
}
