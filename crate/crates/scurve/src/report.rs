//! Plain tables rendered as CSV or aligned markdown.

use std::fmt::Write as _;

use scurve_core::valuation::ValuationRow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// Numbers right-aligned, text left-aligned.
    pub fn to_markdown(&self) -> String {
        let cols = self.headers.len();
        let width: Vec<usize> = (0..cols)
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.headers[c].chars().count(), 3])
                    .max()
                    .unwrap_or(3)
            })
            .collect();
        let numeric: Vec<bool> = (0..cols)
            .map(|c| !self.rows.is_empty() && self.rows.iter().all(|r| r[c].parse::<f64>().is_ok()))
            .collect();
        let line = |cells: &[String]| {
            let body: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(c, v)| if numeric[c] { format!("{v:>w$}", w = width[c]) } else { format!("{v:<w$}", w = width[c]) })
                .collect();
            format!("| {} |\n", body.join(" | "))
        };
        let mut s = line(&self.headers);
        let rule: Vec<String> = (0..cols)
            .map(|c| {
                let dashes = "-".repeat(width[c] - 1);
                if numeric[c] { format!("{dashes}:") } else { format!("{dashes}-") }
            })
            .collect();
        let _ = writeln!(s, "| {} |", rule.join(" | "));
        for r in &self.rows {
            s.push_str(&line(r));
        }
        s
    }
}

/// Fixed-point with a period decimal separator.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    // never print "-0.0"
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') { s[1..].to_string() } else { s }
}

pub fn billions(v: f64) -> String {
    fixed(v / 1e9, 1)
}

pub fn millions(v: f64) -> String {
    fixed(v / 1e6, 1)
}

/// Short scientific notation, e.g. `1.2e-4`.
pub fn sci(v: f64, decimals: usize) -> String {
    format!("{v:.decimals$e}")
}

/// Discount rate as a percentage without trailing zeros, e.g. `5` or `2.5`.
pub fn percent(rate: f64) -> String {
    let s = fixed(rate * 100.0, 6);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `discount,base,high,extreme`: discount in percent, values in billions.
pub fn valuation_table(rows: &[ValuationRow]) -> Table {
    let mut t = Table::new(["discount", "base", "high", "extreme"]);
    for row in rows {
        t.push([
            percent(row.discount),
            billions(row.values.base),
            billions(row.values.high),
            billions(row.values.extreme),
        ]);
    }
    t
}

/// `t,value` rows at full precision.
pub fn trajectory_table(points: &[(f64, f64)]) -> Table {
    let mut t = Table::new(["t", "value"]);
    for (x, y) in points {
        t.push([format!("{x}"), format!("{y}")]);
    }
    t
}
