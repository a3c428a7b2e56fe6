//! Dated count series: CSV parsing, validation, serialization and the
//! conversion to elapsed years.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use scurve_core::ElapsedSeries;

/// Days per year used for elapsed-time conversion.
pub const DAYS_PER_YEAR: f64 = 365.25;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("no observations")]
    NoObservations,
    #[error("line {line}: nonmonotonic dates")]
    Nonmonotonic { line: u64 },
    #[error("line {line}: nonpositive value {value}")]
    NonPositive { line: u64, value: f64 },
    #[error("epoch {epoch} is after the first observation {first}")]
    EpochAfterFirst { epoch: NaiveDate, first: NaiveDate },
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Write(#[from] std::io::Error),
}

/// A validated dated series: dates strictly increasing, values positive,
/// epoch not after the first date.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSeries {
    label: String,
    epoch: NaiveDate,
    points: Vec<(NaiveDate, f64)>,
    approximate: bool,
}

impl ObservationSeries {
    pub fn new(label: impl Into<String>, epoch: NaiveDate, points: Vec<(NaiveDate, f64)>) -> Result<Self, IngestError> {
        let Some(&(first, _)) = points.first() else {
            return Err(IngestError::NoObservations);
        };
        // header is line 1, so point i sits on line i + 2
        for (i, &(_, v)) in points.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(IngestError::NonPositive {
                    line: i as u64 + 2,
                    value: v,
                });
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(IngestError::Nonmonotonic { line: i as u64 + 3 });
        }
        if epoch > first {
            return Err(IngestError::EpochAfterFirst { epoch, first });
        }
        Ok(Self {
            label: label.into(),
            epoch,
            points,
            approximate: false,
        })
    }

    /// Marks the values as an approximate transcription.
    pub fn with_approximate(mut self, approximate: bool) -> Self {
        self.approximate = approximate;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn epoch(&self) -> NaiveDate {
        self.epoch
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn approximate(&self) -> bool {
        self.approximate
    }

    /// Same observations measured from another epoch.
    pub fn with_epoch(&self, epoch: NaiveDate) -> Result<Self, IngestError> {
        Ok(Self::new(self.label.clone(), epoch, self.points.clone())?.with_approximate(self.approximate))
    }

    pub fn to_elapsed(&self) -> ElapsedSeries {
        let points = self
            .points
            .iter()
            .map(|&(d, v)| (years_between(self.epoch, d), v))
            .collect();
        ElapsedSeries::new(self.label.clone(), points).expect("validated series maps to a valid elapsed series")
    }
}

/// Fractional years from `from` to `to` on a 365.25-day year.
pub fn years_between(from: NaiveDate, to: NaiveDate) -> f64 {
    (to - from).num_days() as f64 / DAYS_PER_YEAR
}

/// Accepts `YYYY-MM-DD`, `YYYY-MM` (resolved to the 15th) and `YYYY-Qn`
/// (resolved to the last day of the quarter).
pub fn parse_date(s: &str) -> Result<NaiveDate, String> {
    let s = s.trim();
    let bad = || format!("invalid date `{s}` (expected YYYY-MM-DD, YYYY-MM or YYYY-Qn)");
    let mut parts = s.split('-');
    let (Some(y), Some(m)) = (parts.next(), parts.next()) else {
        return Err(bad());
    };
    let day = parts.next();
    if parts.next().is_some() || y.len() != 4 {
        return Err(bad());
    }
    let year: i32 = y.parse().map_err(|_| bad())?;
    if let Some(q) = m.strip_prefix('Q') {
        if day.is_some() {
            return Err(bad());
        }
        let q: u32 = q.parse().map_err(|_| bad())?;
        if !(1..=4).contains(&q) {
            return Err(bad());
        }
        let next = if q == 4 {
            NaiveDate::from_ymd_opt(year + 1, 1, 1)
        } else {
            NaiveDate::from_ymd_opt(year, 3 * q + 1, 1)
        };
        return next.and_then(|d| d.pred_opt()).ok_or_else(bad);
    }
    if m.len() != 2 {
        return Err(bad());
    }
    let month: u32 = m.parse().map_err(|_| bad())?;
    let day: u32 = match day {
        None => 15,
        Some(d) if d.len() == 2 => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
    };
    NaiveDate::from_ymd_opt(year, month, day).ok_or_else(bad)
}

/// Parses a `date,value` CSV. With no epoch the first date is used.
pub fn parse_series<R: Read>(label: &str, source: R, epoch: Option<NaiveDate>) -> Result<ObservationSeries, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "date" || &headers[1] != "value" {
        return Err(IngestError::Malformed {
            line: 1,
            msg: "expected header `date,value`".into(),
        });
    }
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            IngestError::Malformed { line, msg: e.to_string() }
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(IngestError::Malformed {
                line,
                msg: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let date = parse_date(&rec[0]).map_err(|msg| IngestError::Malformed { line, msg })?;
        let value: f64 = rec[1].parse().map_err(|_| IngestError::Malformed {
            line,
            msg: format!("invalid value `{}`", &rec[1]),
        })?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(IngestError::NonPositive { line, value });
        }
        if let Some(&(prev, _)) = points.last() {
            if date <= prev {
                return Err(IngestError::Nonmonotonic { line });
            }
        }
        points.push((date, value));
    }
    let Some(&(first, _)) = points.first() else {
        return Err(IngestError::NoObservations);
    };
    ObservationSeries::new(label, epoch.unwrap_or(first), points)
}

pub fn read_series(path: &Path, epoch: Option<NaiveDate>) -> Result<ObservationSeries, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    let label = path.file_stem().map_or_else(|| "series".into(), |s| s.to_string_lossy().into_owned());
    parse_series(&label, file, epoch)
}

/// Writes `date,value` with full dates and shortest round-trip numbers.
pub fn write_series<W: Write>(series: &ObservationSeries, mut out: W) -> std::io::Result<()> {
    out.write_all(series_csv(series).as_bytes())
}

pub fn series_csv(series: &ObservationSeries) -> String {
    let mut s = String::from("date,value\n");
    for (d, v) in series.points() {
        let _ = writeln!(s, "{:04}-{:02}-{:02},{v}", d.year(), d.month(), d.day());
    }
    s
}

/// `(customers, yearly revenue)` pairs read from a `date,customers,revenue` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RevenuePairs {
    pub label: String,
    pub dates: Vec<NaiveDate>,
    pub pairs: Vec<(f64, f64)>,
}

pub fn parse_revenue_pairs<R: Read>(label: &str, source: R) -> Result<RevenuePairs, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["date", "customers", "revenue"] {
        return Err(IngestError::Malformed {
            line: 1,
            msg: "expected header `date,customers,revenue`".into(),
        });
    }
    let mut out = RevenuePairs {
        label: label.into(),
        dates: Vec::new(),
        pairs: Vec::new(),
    };
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let malformed = |msg: String| IngestError::Malformed { line, msg };
        if rec.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", rec.len())));
        }
        let date = parse_date(&rec[0]).map_err(malformed)?;
        let num = |i: usize| -> Result<f64, IngestError> {
            let v: f64 = rec[i].parse().map_err(|_| IngestError::Malformed {
                line,
                msg: format!("invalid number `{}`", &rec[i]),
            })?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(IngestError::NonPositive { line, value: v });
            }
            Ok(v)
        };
        out.pairs.push((num(1)?, num(2)?));
        out.dates.push(date);
    }
    if out.pairs.is_empty() {
        return Err(IngestError::NoObservations);
    }
    Ok(out)
}
