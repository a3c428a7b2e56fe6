//! Calibration of exponential and logistic growth curves on user/customer
//! count series, detection of the switch from unlimited to saturating
//! growth, and conversion of the calibrated scenarios into discounted
//! cash-flow valuations.
//!
//! The crate is `no_std` (it needs `alloc`). Calendar handling, file
//! formats and the command-line front end live in the `scurve` crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod calibration;
pub mod dist;
mod error;
pub(crate) mod math;
pub mod models;
pub mod scenario;
mod series;
pub mod simplex;
pub mod valuation;

pub use error::{Error, Result};
pub use models::{ExponentialParams, LogisticParams};
pub use series::ElapsedSeries;
