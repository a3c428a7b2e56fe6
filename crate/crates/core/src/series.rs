use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Counts indexed by elapsed years since an epoch.
///
/// Times are finite, non-negative and strictly increasing; values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ElapsedSeries {
    label: String,
    points: Vec<(f64, f64)>,
}

impl ElapsedSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        for &(t, v) in &points {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::InvalidSeries("non-finite time or value"));
            }
            if t < 0.0 {
                return Err(Error::InvalidSeries("negative elapsed time"));
            }
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSeries("times not strictly increasing"));
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        self.points.last().copied()
    }

    pub fn max_value(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }

    /// The series with its `n` most recent points removed.
    pub fn drop_last(&self, n: usize) -> Self {
        let keep = self.points.len().saturating_sub(n);
        Self {
            label: self.label.clone(),
            points: self.points[..keep].to_vec(),
        }
    }
}
