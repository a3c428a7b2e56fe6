//! Command-line definitions and the subcommand implementations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use scurve_core::calibration::{regime_scan, LogisticFitOptions};
use scurve_core::scenario::{build_scenarios_with, forecast, ScenarioKind, ScenarioOptions, ScenarioSet};
use scurve_core::valuation::{
    avg_revenue_per_user, fit_trend, linear_revenue_fit, steady_state_revenue, valuation_table, value_company,
    value_company_with_decay, SoftNumbers, TrendPair,
};

use crate::datasets;
use crate::ingest::{self, parse_date, IngestError, ObservationSeries, RevenuePairs};
use crate::report::{self, billions, fixed, millions, sci, Table};
use crate::svg::{LineChart, Style};

#[derive(Parser, Debug)]
#[command(name = "scurve", version, about = "Logistic growth calibration and user-based company valuation")]
pub struct Cli {
    /// Seed for the randomized fit restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving CSV files (and SVG charts with --format svg).
    #[arg(long, global = true, env = "SCURVE_OUT")]
    pub out: Option<PathBuf>,
    /// Console table format; `svg` additionally writes charts to --out.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exponential fits with the latest points recursively omitted.
    Regime(RegimeArgs),
    /// Rate regression, capacity bounds and the three logistic scenarios.
    Scenarios(ScenarioArgs),
    /// Discounted value of the scenario user bases.
    Value(ValueArgs),
    /// Revenue and user trends and the revenue-per-user decay.
    Trends(TrendArgs),
    /// Linear revenue model and steady-state revenues.
    Revenue(RevenueArgs),
}

#[derive(Args, Debug)]
pub struct DataArgs {
    /// Built-in dataset name or path to a `date,value` CSV.
    #[arg(long, default_value = datasets::FACEBOOK_USERS)]
    pub dataset: String,
    /// Date of t = 0 (YYYY-MM-DD, YYYY-MM or YYYY-Qn); defaults to the
    /// built-in epoch, or the first date of a file.
    #[arg(long, value_parser = parse_date)]
    pub epoch: Option<NaiveDate>,
}

#[derive(Args, Debug)]
pub struct RegimeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Largest number of trailing points omitted.
    #[arg(long, default_value_t = 10)]
    pub max_omit: usize,
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Forecast horizon in years past the last observation.
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    /// Forecast sampling step in years.
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct ValueArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Discount rates in percent.
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0])]
    pub discounts: Vec<f64>,
    /// Profit margin as a fraction; requires --rev-per-user.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Yearly revenue per user in USD; requires --margin.
    #[arg(long)]
    pub rev_per_user: Option<f64>,
    /// Cash-flow horizon in years.
    #[arg(long, default_value_t = 50)]
    pub horizon: u32,
    /// Discount rate in percent for the company valuation.
    #[arg(long, default_value_t = 5.0)]
    pub headline_discount: f64,
    /// Let revenue per user follow the revenue/user trend ratio instead of
    /// staying flat (sensitivity run); requires --revenues.
    #[arg(long, requires = "revenues")]
    pub decay: bool,
    /// Revenue series for --decay.
    #[arg(long)]
    pub revenues: Option<String>,
}

#[derive(Args, Debug)]
pub struct TrendArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Yearly revenue series, measured from the user series' epoch.
    #[arg(long, default_value = datasets::FACEBOOK_REVENUES)]
    pub revenues: String,
    /// Company age in years; defaults to the time of the last user observation.
    #[arg(long)]
    pub age: Option<f64>,
    /// Averaging window in whole years.
    #[arg(long, default_value_t = 5)]
    pub window: u32,
}

#[derive(Args, Debug)]
pub struct RevenueArgs {
    /// Built-in name or path to a `date,customers,revenue` CSV.
    #[arg(long, default_value = datasets::GROUPON_REVENUE_PAIRS)]
    pub pairs: String,
    /// Customer series whose scenario ceilings are priced.
    #[arg(long, default_value = datasets::GROUPON_REPEAT_CUSTOMERS)]
    pub dataset: String,
    #[arg(long, value_parser = parse_date)]
    pub epoch: Option<NaiveDate>,
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] scurve_core::Error),
}

impl AppError {
    /// 2 for input, usage and IO problems, 3 when the model does not apply.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Model(scurve_core::Error::InvalidArgument(_)) => 2,
            AppError::Model(_) => 3,
            _ => 2,
        }
    }
}

/// Whether every numerical optimization converged.
pub type Converged = bool;

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Converged, AppError> {
    if cli.format == Format::Svg && cli.out.is_none() {
        return Err(AppError::Usage("--format svg needs --out".into()));
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|source| AppError::Io {
            path: dir.clone(),
            source,
        })?;
    }
    let mut ctx = Ctx {
        out: cli.out.as_deref(),
        format: cli.format,
        stdout,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Regime(a) => cmd_regime(&mut ctx, a),
        Command::Scenarios(a) => cmd_scenarios(&mut ctx, a),
        Command::Value(a) => cmd_value(&mut ctx, a),
        Command::Trends(a) => cmd_trends(&mut ctx, a),
        Command::Revenue(a) => cmd_revenue(&mut ctx, a),
    }
}

struct Ctx<'a> {
    out: Option<&'a Path>,
    format: Format,
    stdout: &'a mut dyn Write,
    seed: u64,
}

impl Ctx<'_> {
    fn say(&mut self, line: &str) -> Result<(), AppError> {
        writeln!(self.stdout, "{line}").map_err(|source| AppError::Io {
            path: "<stdout>".into(),
            source,
        })
    }

    /// Prints the table and writes `<name>.csv` when an output directory is set.
    fn table(&mut self, name: &str, title: &str, t: &Table) -> Result<(), AppError> {
        let body = match self.format {
            Format::Csv => format!("# {title}\n{}", t.to_csv()),
            Format::Markdown | Format::Svg => format!("## {title}\n\n{}", t.to_markdown()),
        };
        self.say(&body)?;
        self.write_file(&format!("{name}.csv"), &t.to_csv())
    }

    fn chart(&mut self, name: &str, chart: &LineChart) -> Result<(), AppError> {
        if self.format == Format::Svg {
            self.write_file(&format!("{name}.svg"), &chart.render())?;
        }
        Ok(())
    }

    fn write_file(&mut self, file: &str, contents: &str) -> Result<(), AppError> {
        let Some(dir) = self.out else { return Ok(()) };
        let path = dir.join(file);
        fs::write(&path, contents).map_err(|source| AppError::Io { path, source })
    }

    fn scenario_options(&self) -> ScenarioOptions {
        ScenarioOptions {
            fit: LogisticFitOptions {
                seed: self.seed,
                ..LogisticFitOptions::default()
            },
            ..ScenarioOptions::default()
        }
    }
}

/// Resolves a built-in name or a file path.
pub fn load_series(name: &str, epoch: Option<NaiveDate>) -> Result<ObservationSeries, AppError> {
    if datasets::is_builtin(name) {
        let s = datasets::builtin_series(name)?;
        return Ok(match epoch {
            Some(e) => s.with_epoch(e)?,
            None => s,
        });
    }
    Ok(ingest::read_series(Path::new(name), epoch)?)
}

fn load_pairs(name: &str) -> Result<RevenuePairs, AppError> {
    if datasets::is_builtin(name) {
        return Ok(datasets::builtin_revenue_pairs(name)?);
    }
    let file = fs::File::open(name).map_err(|source| IngestError::Io {
        path: name.into(),
        source,
    })?;
    Ok(ingest::parse_revenue_pairs(name, file)?)
}

fn note_approximate(ctx: &mut Ctx<'_>, s: &ObservationSeries) -> Result<(), AppError> {
    if s.approximate() {
        ctx.say(&format!("note: `{}` is an approximate transcription; fitted values carry no tight precision\n", s.label()))?;
    }
    Ok(())
}

fn cmd_regime(ctx: &mut Ctx<'_>, a: &RegimeArgs) -> Result<Converged, AppError> {
    let series = load_series(&a.data.dataset, a.data.epoch)?;
    note_approximate(ctx, &series)?;
    let el = series.to_elapsed();
    let max_omit = a.max_omit.min(el.len().saturating_sub(2));
    let scan = regime_scan(&el, max_omit)?;

    let mut t = Table::new(["omitted", "error"]);
    for (k, e) in &scan.errors {
        t.push([k.to_string(), fixed(*e, 6)]);
    }
    ctx.table("regime", "exponential fitting error vs omitted latest points", &t)?;
    let verdict = if scan.regime_change_detected {
        format!("regime change detected (ratio ≈ {})", fixed(scan.jump_ratio, 1))
    } else {
        format!("no regime change (ratio ≈ {})", fixed(scan.jump_ratio, 1))
    };
    ctx.say(&verdict)?;

    let mut chart = LineChart::new(format!("Exponential fit error: {}", series.label()), "latest points omitted", "error", true);
    chart.add("error", scan.errors.iter().map(|&(k, e)| (k as f64, e)).collect(), Style::Line);
    ctx.chart("regime", &chart)?;
    Ok(scan.all_converged)
}

fn scenario_table(set: &ScenarioSet) -> Table {
    let mut t = Table::new(["scenario", "k_millions", "r", "p0", "error", "capacity"]);
    for (kind, fit) in set.iter() {
        t.push([
            kind.name().to_string(),
            millions(fit.params.k),
            fixed(fit.params.r, 4),
            fixed(fit.params.p0, 0),
            fixed(fit.error, 4),
            if fit.k_fixed { "fixed" } else { "fitted" }.to_string(),
        ]);
    }
    t
}

fn build(ctx: &mut Ctx<'_>, series: &ObservationSeries) -> Result<ScenarioSet, AppError> {
    let set = build_scenarios_with(&series.to_elapsed(), &ctx.scenario_options())?;
    if set.capacity_weakly_identified() {
        eprintln!("warning: no regime change in `{}`; the carrying capacity is weakly identified", series.label());
    }
    Ok(set)
}

fn cmd_scenarios(ctx: &mut Ctx<'_>, a: &ScenarioArgs) -> Result<Converged, AppError> {
    let series = load_series(&a.data.dataset, a.data.epoch)?;
    note_approximate(ctx, &series)?;
    let set = build(ctx, &series)?;
    let reg = &set.regression;

    let mut t = Table::new(["quantity", "value"]);
    let rows: [(&str, String); 8] = [
        ("a", fixed(reg.a, 5)),
        ("b", sci(reg.b, 5)),
        ("se_b", sci(reg.se_b, 5)),
        ("n_pairs", reg.n_pairs.to_string()),
        ("k_point", fixed(reg.k_point, 0)),
        ("k_80", fixed(set.k_high, 0)),
        ("k_95", fixed(set.k_extreme, 0)),
        ("p0", fixed(set.initial.p0, 0)),
    ];
    for (q, v) in rows {
        t.push([q.to_string(), v]);
    }
    ctx.table("regression", "growth-rate regression and capacity bounds", &t)?;
    ctx.table("scenarios", "logistic scenarios", &scenario_table(&set))?;

    match &set.nested {
        Some(n) => {
            let verdict = if n.p_value < 1e-3 { "rejected" } else { "not rejected" };
            ctx.say(&format!(
                "nested test: F = {} on ({}, {}) df, p = {}; exponential model {verdict} at the 0.001 level",
                fixed(n.f_statistic, 2),
                n.df_num,
                n.df_den,
                sci(n.p_value, 2)
            ))?;
        }
        None => ctx.say("nested test: not available")?,
    }

    let el = series.to_elapsed();
    let mut obs = Table::new(["t", "value"]);
    for (x, y) in el.points() {
        obs.push([format!("{x}"), format!("{y}")]);
    }
    ctx.write_file("observations.csv", &obs.to_csv())?;

    let end = set.last_t + a.horizon;
    let grid: Vec<f64> = (0..)
        .map(|i| f64::from(i) * a.step)
        .take_while(|t| *t <= end + 1e-9)
        .collect();
    let mut curves = Table::new(["t", "base", "high", "extreme"]);
    for &x in &grid {
        curves.push([format!("{x}"), format!("{}", set.base.eval(x)), format!("{}", set.high.eval(x)), format!("{}", set.extreme.eval(x))]);
    }
    ctx.write_file("curves.csv", &curves.to_csv())?;
    for (kind, fit) in set.iter() {
        let tr = forecast(fit, set.last_t, a.horizon, a.step)?;
        ctx.write_file(&format!("trajectory_{}.csv", kind.name()), &report::trajectory_table(&tr.points).to_csv())?;
    }

    let mut chart = LineChart::new(format!("Logistic scenarios: {}", series.label()), "years since epoch", "count", false);
    chart.add("observed", el.points().to_vec(), Style::Markers);
    for (kind, fit) in set.iter() {
        chart.add(kind.name(), grid.iter().map(|&x| (x, fit.eval(x))).collect(), Style::Line);
    }
    ctx.chart("scenarios", &chart)?;
    Ok(set.all_converged())
}

fn trends_for(users: &ObservationSeries, revenues: &str) -> Result<TrendPair, AppError> {
    let revenues = load_series(revenues, None)?.with_epoch(users.epoch())?;
    Ok(TrendPair {
        revenue_trend: fit_trend(&revenues.to_elapsed())?,
        user_trend: fit_trend(&users.to_elapsed())?,
    })
}

fn cmd_value(ctx: &mut Ctx<'_>, a: &ValueArgs) -> Result<Converged, AppError> {
    if a.discounts.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(AppError::Usage("discount rates must be positive percentages".into()));
    }
    let soft = match (a.margin, a.rev_per_user) {
        (Some(m), Some(r)) => Some(SoftNumbers::new(a.headline_discount / 100.0, m, r, a.horizon).map_err(|e| AppError::Usage(e.to_string()))?),
        (None, None) => None,
        _ => return Err(AppError::Usage("--margin and --rev-per-user go together".into())),
    };
    if a.horizon < 1 {
        return Err(AppError::Usage("--horizon must be at least 1".into()));
    }

    let series = load_series(&a.data.dataset, a.data.epoch)?;
    note_approximate(ctx, &series)?;
    let set = build(ctx, &series)?;
    let discounts: Vec<f64> = a.discounts.iter().map(|d| d / 100.0).collect();
    let rows = valuation_table(&set, set.last_t, &discounts, a.horizon)?;
    ctx.table(
        "valuation",
        "value in billion USD at 1 USD profit per user per year",
        &report::valuation_table(&rows),
    )?;

    let mut chart = LineChart::new(format!("Normalized value: {}", series.label()), "discount rate (%)", "billion USD", false);
    for kind in ScenarioKind::ALL {
        chart.add(kind.name(), rows.iter().map(|r| (r.discount * 100.0, r.values.get(kind) / 1e9)).collect(), Style::Line);
    }
    ctx.chart("valuation", &chart)?;

    if let Some(soft) = soft {
        let result = if a.decay {
            let trends = trends_for(&series, a.revenues.as_deref().expect("clap enforces --revenues"))?;
            value_company_with_decay(&set, set.last_t, &soft, &trends, set.last_t)?
        } else {
            value_company(&set, set.last_t, &soft)?
        };
        ctx.say(&format!(
            "profit per user: {} USD per year ({} margin x {} USD revenue)",
            fixed(soft.profit_per_user(), 2),
            soft.profit_margin,
            soft.revenue_per_user
        ))?;
        let mut t = Table::new(["scenario", "value_billions"]);
        for (kind, v) in result.per_scenario.iter() {
            t.push([kind.name().to_string(), billions(v)]);
        }
        let basis = if a.decay { ", decaying revenue per user" } else { "" };
        ctx.table(
            "company",
            &format!("company value at {}% discount{basis}", report::percent(soft.discount_rate)),
            &t,
        )?;
    }
    Ok(set.all_converged())
}

fn cmd_trends(ctx: &mut Ctx<'_>, a: &TrendArgs) -> Result<Converged, AppError> {
    let users = load_series(&a.data.dataset, a.data.epoch)?;
    let trends = trends_for(&users, &a.revenues)?;
    let age = a.age.unwrap_or_else(|| users.to_elapsed().last().map_or(0.0, |p| p.0));
    if a.window < 1 || !(age >= f64::from(a.window)) {
        return Err(AppError::Usage(format!("window of {} years does not fit a company age of {} years", a.window, fixed(age, 2))));
    }
    let avg = avg_revenue_per_user(&trends, age, a.window)?;

    let mut t = Table::new(["quantity", "value"]);
    let half_life = trends.half_life().map_or_else(|| "none (no decay)".to_string(), |h| fixed(h, 3));
    let rows: [(&str, String); 10] = [
        ("revenue_level", fixed(trends.revenue_trend.p0, 0)),
        ("revenue_rate", fixed(trends.revenue_trend.r, 4)),
        ("user_level", fixed(trends.user_trend.p0, 0)),
        ("user_rate", fixed(trends.user_trend.r, 4)),
        ("ratio_at_epoch", fixed(trends.revenue_trend.p0 / trends.user_trend.p0, 4)),
        ("ratio_decay_rate", fixed(trends.decay_rate(), 4)),
        ("half_life_years", half_life),
        ("age_years", fixed(age, 3)),
        ("window_years", a.window.to_string()),
        ("avg_revenue_per_user", fixed(avg, 3)),
    ];
    for (q, v) in rows {
        t.push([q.to_string(), v]);
    }
    ctx.table("trends", "exponential trends and revenue per user", &t)?;

    let users_el = users.to_elapsed();
    let revenues_el = load_series(&a.revenues, None)?.with_epoch(users.epoch())?.to_elapsed();
    let end = users_el.last().map_or(1.0, |p| p.0).max(revenues_el.last().map_or(1.0, |p| p.0));
    let grid: Vec<f64> = (0..=100).map(|i| end * f64::from(i) / 100.0).collect();
    let mut chart = LineChart::new("Revenues and users", "years since epoch", "count / USD", true);
    chart.add("revenues", revenues_el.points().to_vec(), Style::Markers);
    chart.add("users", users_el.points().to_vec(), Style::Markers);
    chart.add("revenue trend", grid.iter().map(|&x| (x, trends.revenue_trend.eval(x))).collect(), Style::Line);
    chart.add("user trend", grid.iter().map(|&x| (x, trends.user_trend.eval(x))).collect(), Style::Line);
    ctx.chart("trends", &chart)?;
    Ok(true)
}

fn cmd_revenue(ctx: &mut Ctx<'_>, a: &RevenueArgs) -> Result<Converged, AppError> {
    let pairs = load_pairs(&a.pairs)?;
    let slope = linear_revenue_fit(&pairs.pairs)?;
    ctx.say(&format!("yearly revenue per customer: {} USD ({} pairs)", fixed(slope, 2), pairs.pairs.len()))?;

    let series = load_series(&a.dataset, a.epoch)?;
    note_approximate(ctx, &series)?;
    let set = build(ctx, &series)?;
    let mut t = Table::new(["scenario", "k_millions", "revenue_billions"]);
    for (kind, fit) in set.iter() {
        t.push([kind.name().to_string(), millions(fit.params.k), billions(steady_state_revenue(fit.params.k, slope)?)]);
    }
    ctx.table("revenue", "steady-state yearly revenue", &t)?;

    let mut chart = LineChart::new("Yearly revenue vs customers", "customers (millions)", "revenue (million USD)", false);
    chart.add("observed", pairs.pairs.iter().map(|&(x, y)| (x / 1e6, y / 1e6)).collect(), Style::Markers);
    let x_max = pairs.pairs.iter().map(|p| p.0).fold(0.0, f64::max) / 1e6;
    chart.add("fit", vec![(0.0, 0.0), (x_max, slope * x_max)], Style::Line);
    ctx.chart("revenue", &chart)?;
    Ok(set.all_converged())
}
