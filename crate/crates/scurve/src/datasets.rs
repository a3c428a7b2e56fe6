//! Built-in datasets, embedded as CSV and parsed with the same code path as
//! user files.

use chrono::NaiveDate;

use crate::ingest::{parse_revenue_pairs, parse_series, IngestError, ObservationSeries, RevenuePairs};

pub const FACEBOOK_USERS: &str = "facebook-users";
pub const FACEBOOK_REVENUES: &str = "facebook-revenues";
pub const GROUPON_REPEAT_CUSTOMERS: &str = "groupon-repeat-customers";
pub const GROUPON_REVENUE_PAIRS: &str = "groupon-revenue-pairs";

pub const NAMES: [&str; 4] = [FACEBOOK_USERS, FACEBOOK_REVENUES, GROUPON_REPEAT_CUSTOMERS, GROUPON_REVENUE_PAIRS];

const FACEBOOK_USERS_CSV: &str = include_str!("../data/facebook-users.csv");
// fiscal years, placed at mid-year; 2011 is the circulating estimate
const FACEBOOK_REVENUES_CSV: &str = include_str!("../data/facebook-revenues.csv");
// read off a chart, not a table: approximate
const GROUPON_REPEAT_CUSTOMERS_CSV: &str = include_str!("../data/groupon-repeat-customers.csv");
const GROUPON_REVENUE_PAIRS_CSV: &str = include_str!("../data/groupon-revenue-pairs.csv");

/// Company launch.
pub fn facebook_epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(2004, 2, 15).unwrap()
}

/// Start of the repeat-customer count.
pub fn groupon_epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(2009, 1, 1).unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Series(ObservationSeries),
    RevenuePairs(RevenuePairs),
}

pub fn is_builtin(name: &str) -> bool {
    NAMES.contains(&name)
}

pub fn builtin_dataset(name: &str) -> Result<Dataset, IngestError> {
    let series = |csv: &str, epoch| parse_series(name, csv.as_bytes(), Some(epoch));
    Ok(match name {
        FACEBOOK_USERS => Dataset::Series(series(FACEBOOK_USERS_CSV, facebook_epoch())?),
        FACEBOOK_REVENUES => Dataset::Series(series(FACEBOOK_REVENUES_CSV, facebook_epoch())?),
        GROUPON_REPEAT_CUSTOMERS => {
            Dataset::Series(series(GROUPON_REPEAT_CUSTOMERS_CSV, groupon_epoch())?.with_approximate(true))
        }
        GROUPON_REVENUE_PAIRS => Dataset::RevenuePairs(parse_revenue_pairs(name, GROUPON_REVENUE_PAIRS_CSV.as_bytes())?),
        _ => return Err(IngestError::UnknownDataset(name.into())),
    })
}

/// A built-in dated series; the revenue-pair table is not one.
pub fn builtin_series(name: &str) -> Result<ObservationSeries, IngestError> {
    match builtin_dataset(name)? {
        Dataset::Series(s) => Ok(s),
        Dataset::RevenuePairs(_) => Err(IngestError::UnknownDataset(format!("{name} (not a dated series)"))),
    }
}

pub fn builtin_revenue_pairs(name: &str) -> Result<RevenuePairs, IngestError> {
    match builtin_dataset(name)? {
        Dataset::RevenuePairs(p) => Ok(p),
        Dataset::Series(_) => Err(IngestError::UnknownDataset(format!("{name} (not a revenue-pair table)"))),
    }
}
