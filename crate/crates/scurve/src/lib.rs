//! File formats, built-in datasets, reports and the command-line front end
//! for `scurve-core`.

pub mod app;
pub mod datasets;
pub mod ingest;
pub mod report;
pub mod svg;

pub use app::{run, AppError, Cli};
pub use ingest::{ObservationSeries, RevenuePairs};
