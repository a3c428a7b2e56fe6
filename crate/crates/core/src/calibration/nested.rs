use super::{ExpFitResult, LogisticFit};
use crate::dist::f_sf;
use crate::{Error, Result};

/// F test of the exponential model against the logistic model that nests it
/// (one extra parameter, the carrying capacity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedModelTest {
    pub f_statistic: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub p_value: f64,
}

/// Uses the summed relative residuals of both fits on the same `n` points.
pub fn nested_model_test(exp_fit: &ExpFitResult, log_fit: &LogisticFit, n: usize) -> Result<NestedModelTest> {
    if log_fit.k_fixed {
        return Err(Error::InvalidArgument("nested test needs the unconstrained logistic fit"));
    }
    nested_f_test(exp_fit.residual_sum, log_fit.residual_sum, n)
}

/// `F = (S_exp − S_log) / (S_log / (n − 3))` against `F(1, n − 3)`.
pub fn nested_f_test(s_exp: f64, s_log: f64, n: usize) -> Result<NestedModelTest> {
    if n <= 3 {
        return Err(Error::InsufficientData { needed: 4, got: n });
    }
    if !(s_exp >= 0.0 && s_log >= 0.0) {
        return Err(Error::InvalidArgument("residual sums must be non-negative"));
    }
    let df_den = n - 3;
    if s_log == 0.0 {
        return Ok(NestedModelTest {
            f_statistic: f64::INFINITY,
            df_num: 1,
            df_den,
            p_value: 0.0,
        });
    }
    let f = ((s_exp - s_log) / (s_log / df_den as f64)).max(0.0);
    Ok(NestedModelTest {
        f_statistic: f,
        df_num: 1,
        df_den,
        p_value: f_sf(f, 1.0, df_den as f64),
    })
}
