use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;
use crate::models::{fitting_error_df, relative_residual_sum, LogisticParams, LOGISTIC_PARAM_COUNT};
use crate::simplex::{self, SimplexOptions};
use crate::{ElapsedSeries, Error, Result};

/// A calibrated logistic curve.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub params: LogisticParams,
    /// Relative fitting error with `n − 3` degrees of freedom.
    pub error: f64,
    /// `Σ (oᵢ − eᵢ)² / eᵢ²` at the optimum.
    pub residual_sum: f64,
    /// Carrying capacity held fixed during the fit.
    pub k_fixed: bool,
    pub converged: bool,
}

impl LogisticFit {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.params.eval(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFitOptions {
    pub seed: u64,
    /// Extra starts drawn around the initial guess.
    pub restarts: usize,
    /// Half-width of the uniform log-space perturbation for restarts.
    pub restart_spread: f64,
    pub simplex: SimplexOptions,
}

impl Default for LogisticFitOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 3,
            restart_spread: 0.3,
            simplex: SimplexOptions {
                f_tol: 1e-12,
                x_tol: 1e-10,
                max_iter: 10_000,
                initial_step: 0.1,
            },
        }
    }
}

pub fn fit_logistic(series: &ElapsedSeries, init: &LogisticParams, fixed_k: Option<f64>) -> Result<LogisticFit> {
    fit_logistic_with(series, init, fixed_k, &LogisticFitOptions::default())
}

/// Minimizes the mean squared relative residual over `(p0, r, k)`, or over
/// `(p0, r)` when `fixed_k` is given, with a simplex search in log space.
pub fn fit_logistic_with(
    series: &ElapsedSeries,
    init: &LogisticParams,
    fixed_k: Option<f64>,
    opts: &LogisticFitOptions,
) -> Result<LogisticFit> {
    let n = series.len();
    if n <= LOGISTIC_PARAM_COUNT {
        return Err(Error::InsufficientData {
            needed: LOGISTIC_PARAM_COUNT + 1,
            got: n,
        });
    }
    if let Some(k) = fixed_k {
        if !(k > series.max_value()) || !k.is_finite() {
            return Err(Error::InvalidArgument("fixed carrying capacity must exceed every observation"));
        }
    }
    let init = match fixed_k {
        Some(k) => LogisticParams::new(init.p0.min(0.5 * k), init.r, k)?,
        None => *init,
    };

    let unpack = |z: &[f64]| -> (f64, f64, f64) {
        let k = match fixed_k {
            Some(k) => k,
            None => math::exp(z[2]),
        };
        (math::exp(z[0]), math::exp(z[1]), k)
    };
    let objective = |z: &[f64]| -> f64 {
        let (p0, r, k) = unpack(z);
        let Ok(params) = LogisticParams::new(p0, r, k) else {
            return f64::INFINITY;
        };
        relative_residual_sum(series, |t| params.eval(t))
            .map(|s| s / n as f64)
            .unwrap_or(f64::INFINITY)
    };

    let mut start: Vec<f64> = alloc::vec![math::ln(init.p0), math::ln(init.r)];
    if fixed_k.is_none() {
        start.push(math::ln(init.k));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = alloc::vec![start.clone()];
    for _ in 0..opts.restarts {
        starts.push(
            start
                .iter()
                .map(|z| z + rng.random_range(-opts.restart_spread..=opts.restart_spread))
                .collect(),
        );
    }

    let mut best = starts
        .iter()
        .map(|s| simplex::minimize(objective, s, &opts.simplex))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    // polish: restart the simplex at the incumbent until it stops improving
    for _ in 0..5 {
        let again = simplex::minimize(objective, &best.x, &opts.simplex);
        let improved = again.value < best.value - opts.simplex.f_tol;
        if again.value <= best.value {
            best = again;
        }
        if !improved {
            break;
        }
    }
    if !best.value.is_finite() {
        return Err(Error::InvalidArgument("logistic fit found no feasible parameters"));
    }

    let (p0, r, k) = unpack(&best.x);
    let params = LogisticParams::new(p0, r, k)?;
    Ok(LogisticFit {
        params,
        error: fitting_error_df(series, |t| params.eval(t), n - LOGISTIC_PARAM_COUNT)?,
        residual_sum: relative_residual_sum(series, |t| params.eval(t))?,
        k_fixed: fixed_k.is_some(),
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(p: &LogisticParams, n: usize, t_end: f64) -> ElapsedSeries {
        let pts = (0..n)
            .map(|i| {
                let t = t_end * i as f64 / (n - 1) as f64;
                (t, p.eval(t))
            })
            .collect();
        ElapsedSeries::new("synthetic", pts).unwrap()
    }

    #[test]
    fn recovers_noiseless_logistic_from_perturbed_start() {
        let truth = LogisticParams::new(2.0e5, 1.3, 9.0e8).unwrap();
        let s = synthetic(&truth, 15, 9.0);
        let init = LogisticParams::new(2.0e5 * 1.3, 1.3 * 0.7, 9.0e8 * 1.3).unwrap();
        let fit = fit_logistic(&s, &init, None).unwrap();
        assert!(fit.error < 1e-10, "{fit:?}");
        assert!((fit.params.k / truth.k - 1.0).abs() < 1e-3, "{fit:?}");
        assert!((fit.params.r / truth.r - 1.0).abs() < 1e-3, "{fit:?}");
        assert!((fit.params.p0 / truth.p0 - 1.0).abs() < 1e-3, "{fit:?}");
        assert!(!fit.k_fixed);
    }

    #[test]
    fn fixed_capacity_is_respected() {
        let truth = LogisticParams::new(10.0, 1.0, 1000.0).unwrap();
        let s = synthetic(&truth, 12, 10.0);
        let fit = fit_logistic(&s, &truth, Some(1500.0)).unwrap();
        assert_eq!(fit.params.k, 1500.0);
        assert!(fit.k_fixed);
        let free = fit_logistic(&s, &truth, None).unwrap();
        assert!(fit.error >= free.error - 1e-9);
    }

    #[test]
    fn same_seed_same_answer() {
        let truth = LogisticParams::new(10.0, 1.0, 1000.0).unwrap();
        let s = ElapsedSeries::new(
            "noisy",
            alloc::vec![(0.0, 11.0), (1.0, 26.0), (2.0, 72.0), (3.0, 170.0), (4.0, 370.0), (5.0, 600.0), (6.0, 820.0)],
        )
        .unwrap();
        let a = fit_logistic(&s, &truth, None).unwrap();
        let b = fit_logistic(&s, &truth, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn preconditions() {
        let p = LogisticParams::new(10.0, 1.0, 1000.0).unwrap();
        let short = synthetic(&p, 3, 2.0);
        assert!(matches!(fit_logistic(&short, &p, None), Err(Error::InsufficientData { .. })));
        let s = synthetic(&p, 8, 10.0);
        assert!(fit_logistic(&s, &p, Some(100.0)).is_err());
    }
}
