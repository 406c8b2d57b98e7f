//! Report assembly and the command implementations behind the CLI.
//!
//! A run produces, per distribution, a moments table (sampling-distribution
//! shape of the estimator) and a precision table (standardized SE and CI),
//! plus ratio tables against the standard normal baseline when one is
//! configured. Markdown rounds to 4 decimals for reading; csv and json
//! carry full precision. All file contents are pure functions of the
//! configuration, so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analytic::{true_es, true_srm, true_var};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::estimators::{estimate_es, estimate_srm, estimate_var, SortedSample};
use crate::mc_engine::{
    run_cell, run_experiment_with, CellEstimates, ExperimentConfig, ExperimentResults,
    MeasureKind, RiskMeasure, SKEWED_MU, SKEWED_SIGMA1, SKEWED_SIGMA2,
};
use crate::stats::{jarque_bera, moment_stats, standardized_ci, standardized_se};

/// Confidence level for the standardized interval columns.
pub const CI_LEVEL: f64 = 0.90;

/// Everything reported about one (distribution, n, measure) cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    #[serde(skip)]
    pub dist_index: usize,
    pub family: String,
    pub params: String,
    pub measure: &'static str,
    pub param: f64,
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub jb_pvalue: Option<f64>,
    pub std_se: Option<f64>,
    pub ci_lb: Option<f64>,
    pub ci_ub: Option<f64>,
}

/// Precision ratios of one distribution's cell against the baseline's.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    #[serde(skip)]
    pub dist_index: usize,
    pub family: String,
    pub params: String,
    pub baseline: String,
    pub measure: &'static str,
    pub param: f64,
    pub n: usize,
    pub std_se_ratio: Option<f64>,
    pub ci_lb_ratio: Option<f64>,
    pub ci_ub_ratio: Option<f64>,
}

/// Summarize one cell's trial estimates. A mean too close to zero leaves
/// the standardized columns undefined rather than exploding them.
pub fn summarize_cell(dist_index: usize, cell: &CellEstimates) -> Result<CellReport> {
    let stats = moment_stats(&cell.estimates)?;
    let t = cell.estimates.len();
    let jb_pvalue = match (stats.skewness, stats.kurtosis) {
        (Some(s), Some(k)) => Some(jarque_bera(s, k, t).1),
        _ => None,
    };
    let std_se = match standardized_se(&cell.estimates) {
        Ok(v) => Some(v),
        Err(Error::DegenerateMean { .. }) => None,
        Err(e) => return Err(e),
    };
    let (ci_lb, ci_ub) = match standardized_ci(&cell.estimates, CI_LEVEL) {
        Ok((lb, ub)) => (Some(lb), Some(ub)),
        Err(Error::DegenerateMean { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(CellReport {
        dist_index,
        family: cell.dist.family().to_string(),
        params: cell.dist.params_label(),
        measure: cell.measure.label(),
        param: cell.measure.param(),
        n: cell.n,
        mean: stats.mean,
        sd: stats.sd,
        skewness: stats.skewness,
        kurtosis: stats.kurtosis,
        jb_pvalue,
        std_se,
        ci_lb,
        ci_ub,
    })
}

/// Summarize every cell of a finished experiment, in configuration order.
pub fn summarize(results: &ExperimentResults) -> Result<Vec<CellReport>> {
    results
        .cells
        .iter()
        .map(|cell| {
            let dist_index = results
                .config
                .distributions
                .iter()
                .position(|d| *d == cell.dist)
                .unwrap_or(usize::MAX);
            summarize_cell(dist_index, cell)
        })
        .collect()
}

/// Index of the ratio baseline: the first standard normal in the config.
pub fn baseline_index(config: &ExperimentConfig) -> Option<usize> {
    config
        .distributions
        .iter()
        .position(|d| matches!(d, DistributionSpec::Normal { mu, sigma } if *mu == 0.0 && *sigma == 1.0))
}

/// Precision ratios of every non-baseline distribution against the
/// baseline, cell by cell.
pub fn ratio_reports(config: &ExperimentConfig, reports: &[CellReport]) -> Vec<RatioReport> {
    let Some(base_idx) = baseline_index(config) else {
        return Vec::new();
    };
    let base_label = config.distributions[base_idx].params_label();
    let mut out = Vec::new();
    for r in reports {
        if r.dist_index == base_idx {
            continue;
        }
        let Some(base) = reports.iter().find(|b| {
            b.dist_index == base_idx && b.measure == r.measure && b.param == r.param && b.n == r.n
        }) else {
            continue;
        };
        let div = |num: Option<f64>, den: Option<f64>| match (num, den) {
            (Some(a), Some(b)) => crate::stats::ratio(a, b),
            _ => None,
        };
        out.push(RatioReport {
            dist_index: r.dist_index,
            family: r.family.clone(),
            params: r.params.clone(),
            baseline: format!("normal ({base_label})"),
            measure: r.measure,
            param: r.param,
            n: r.n,
            std_se_ratio: div(r.std_se, base.std_se),
            ci_lb_ratio: div(r.ci_lb, base.ci_lb),
            ci_ub_ratio: div(r.ci_ub, base.ci_ub),
        });
    }
    out
}

/// Output format selection for `run` and `true-values`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatChoice {
    Csv,
    Json,
    Markdown,
    All,
}

impl FormatChoice {
    fn wants_csv(self) -> bool {
        matches!(self, FormatChoice::Csv | FormatChoice::All)
    }
    fn wants_json(self) -> bool {
        matches!(self, FormatChoice::Json | FormatChoice::All)
    }
    fn wants_markdown(self) -> bool {
        matches!(self, FormatChoice::Markdown | FormatChoice::All)
    }
}

impl std::str::FromStr for FormatChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FormatChoice::Csv),
            "json" => Ok(FormatChoice::Json),
            "markdown" => Ok(FormatChoice::Markdown),
            "all" => Ok(FormatChoice::All),
            other => Err(Error::Config(format!(
                "unknown format `{other}`, expected csv, json, markdown, or all"
            ))),
        }
    }
}

/// 4-decimal rendering for markdown tables; undefined cells print `undef`.
fn fmt4(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.4}"),
        None => "undef".to_string(),
    }
}

/// Full-precision rendering for csv; shortest string that round-trips.
fn fmt_full(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "undef".to_string(),
    }
}

const CELL_STATS: [&str; 8] = [
    "mean",
    "sd",
    "skewness",
    "kurtosis",
    "jb_pvalue",
    "std_se",
    "ci_lb",
    "ci_ub",
];

fn cell_stat(r: &CellReport, stat: &str) -> Option<f64> {
    match stat {
        "mean" => Some(r.mean),
        "sd" => Some(r.sd),
        "skewness" => r.skewness,
        "kurtosis" => r.kurtosis,
        "jb_pvalue" => r.jb_pvalue,
        "std_se" => r.std_se,
        "ci_lb" => r.ci_lb,
        "ci_ub" => r.ci_ub,
        _ => unreachable!("unknown stat {stat}"),
    }
}

const RATIO_STATS: [&str; 3] = ["std_se_ratio", "ci_lb_ratio", "ci_ub_ratio"];

fn ratio_stat(r: &RatioReport, stat: &str) -> Option<f64> {
    match stat {
        "std_se_ratio" => r.std_se_ratio,
        "ci_lb_ratio" => r.ci_lb_ratio,
        "ci_ub_ratio" => r.ci_ub_ratio,
        _ => unreachable!("unknown stat {stat}"),
    }
}

/// Long-format csv over the shared (family, params, measure, param, n,
/// stat, value) schema.
fn csv_for_cells(reports: &[&CellReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "params", "measure", "param", "n", "stat", "value"])?;
    for r in reports {
        for stat in CELL_STATS {
            w.write_record([
                r.family.as_str(),
                r.params.as_str(),
                r.measure,
                &fmt_full(Some(r.param)),
                &r.n.to_string(),
                stat,
                &fmt_full(cell_stat(r, stat)),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf8"))
}

fn csv_for_ratios(reports: &[&RatioReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "params", "measure", "param", "n", "stat", "value"])?;
    for r in reports {
        for stat in RATIO_STATS {
            w.write_record([
                r.family.as_str(),
                r.params.as_str(),
                r.measure,
                &fmt_full(Some(r.param)),
                &r.n.to_string(),
                stat,
                &fmt_full(ratio_stat(r, stat)),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf8"))
}

/// One markdown table per statistic: rows are (measure, param), columns are
/// the sample sizes.
fn markdown_stat_tables(
    title: &str,
    sizes: &[usize],
    rows: &[(&'static str, f64)],
    stats: &[&str],
    lookup: impl Fn(&'static str, f64, usize, &str) -> Option<f64>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {title}");
    for stat in stats {
        let _ = writeln!(out, "\n## {stat}\n");
        let header: Vec<String> = sizes.iter().map(|n| format!("n={n}")).collect();
        let _ = writeln!(out, "| measure | param | {} |", header.join(" | "));
        let _ = writeln!(
            out,
            "|---|---|{}|",
            sizes.iter().map(|_| "---").collect::<Vec<_>>().join("|")
        );
        for &(measure, param) in rows {
            let cells: Vec<String> = sizes
                .iter()
                .map(|&n| fmt4(lookup(measure, param, n, stat)))
                .collect();
            let _ = writeln!(
                out,
                "| {measure} | {} | {} |",
                fmt4(Some(param)),
                cells.join(" | ")
            );
        }
    }
    out
}

fn measure_rows(reports: &[&CellReport]) -> Vec<(&'static str, f64)> {
    let mut rows: Vec<(&'static str, f64)> = Vec::new();
    for r in reports {
        if !rows.contains(&(r.measure, r.param)) {
            rows.push((r.measure, r.param));
        }
    }
    rows
}

fn grid_sizes(reports: &[&CellReport]) -> Vec<usize> {
    let mut sizes: Vec<usize> = Vec::new();
    for r in reports {
        if !sizes.contains(&r.n) {
            sizes.push(r.n);
        }
    }
    sizes
}

/// What `run` writes and reports back.
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub wall: Duration,
    pub threads_used: usize,
    pub cells: usize,
}

/// Options for a full experiment run.
pub struct RunOptions {
    pub config: ExperimentConfig,
    pub out_dir: PathBuf,
    pub format: FormatChoice,
    pub kinds: Vec<MeasureKind>,
    pub threads: Option<usize>,
    pub dump_raw: bool,
}

/// Resolve the worker count: explicit flag first, then RISKPREC_THREADS,
/// then rayon's default.
pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("RISKPREC_THREADS") {
        Ok(s) => {
            let t: usize = s.parse().map_err(|_| {
                Error::Config(format!("RISKPREC_THREADS must be a positive integer, got `{s}`"))
            })?;
            if t == 0 {
                return Err(Error::Config("RISKPREC_THREADS must be positive".into()));
            }
            Ok(Some(t))
        }
        Err(_) => Ok(None),
    }
}

fn with_thread_pool<T>(threads: Option<usize>, job: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Run the configured experiment and write every requested artifact.
pub fn cmd_run(opts: &RunOptions) -> Result<RunSummary> {
    opts.config.validate()?;
    let started = Instant::now();
    let results = with_thread_pool(opts.threads, || {
        run_experiment_with(&opts.config, &opts.kinds)
    })?;
    let reports = summarize(&results)?;
    let ratios = ratio_reports(&opts.config, &reports);

    std::fs::create_dir_all(&opts.out_dir)?;
    let mut files = Vec::new();

    let resolved = serde_json::to_string_pretty(&opts.config)? + "\n";
    files.push(write_file(&opts.out_dir, "config.json", &resolved)?);

    for (idx, dist) in opts.config.distributions.iter().enumerate() {
        let slug = format!("{idx}_{}", dist.family());
        let mine: Vec<&CellReport> = reports.iter().filter(|r| r.dist_index == idx).collect();
        if mine.is_empty() {
            continue;
        }
        let sizes = grid_sizes(&mine);
        let rows = measure_rows(&mine);
        let title_params = dist.params_label();

        if opts.format.wants_csv() {
            files.push(write_file(
                &opts.out_dir,
                &format!("moments_{slug}.csv"),
                &csv_for_cells(&mine)?,
            )?);
        }
        if opts.format.wants_markdown() {
            let lookup = |measure: &'static str, param: f64, n: usize, stat: &str| {
                mine.iter()
                    .find(|r| r.measure == measure && r.param == param && r.n == n)
                    .and_then(|r| cell_stat(r, stat))
            };
            let moments = markdown_stat_tables(
                &format!("moments: {} ({title_params})", dist.family()),
                &sizes,
                &rows,
                &CELL_STATS[..5],
                lookup,
            );
            files.push(write_file(&opts.out_dir, &format!("moments_{slug}.md"), &moments)?);
            let precision = markdown_stat_tables(
                &format!("precision: {} ({title_params})", dist.family()),
                &sizes,
                &rows,
                &CELL_STATS[5..],
                lookup,
            );
            files.push(write_file(
                &opts.out_dir,
                &format!("precision_{slug}.md"),
                &precision,
            )?);
        }
    }

    if opts.format.wants_json() {
        let json = serde_json::to_string_pretty(&reports)? + "\n";
        files.push(write_file(&opts.out_dir, "cells.json", &json)?);
    }

    if !ratios.is_empty() {
        let base_idx = baseline_index(&opts.config).expect("ratios imply a baseline");
        for (idx, dist) in opts.config.distributions.iter().enumerate() {
            if idx == base_idx {
                continue;
            }
            let mine: Vec<&RatioReport> = ratios.iter().filter(|r| r.dist_index == idx).collect();
            if mine.is_empty() {
                continue;
            }
            let slug = format!("{idx}_{}_vs_{base_idx}_normal", dist.family());
            if opts.format.wants_csv() {
                files.push(write_file(
                    &opts.out_dir,
                    &format!("ratio_{slug}.csv"),
                    &csv_for_ratios(&mine)?,
                )?);
            }
            if opts.format.wants_markdown() {
                let cell_refs: Vec<&CellReport> =
                    reports.iter().filter(|r| r.dist_index == idx).collect();
                let sizes = grid_sizes(&cell_refs);
                let rows = measure_rows(&cell_refs);
                let lookup = |measure: &'static str, param: f64, n: usize, stat: &str| {
                    mine.iter()
                        .find(|r| r.measure == measure && r.param == param && r.n == n)
                        .and_then(|r| ratio_stat(r, stat))
                };
                let md = markdown_stat_tables(
                    &format!(
                        "precision ratios: {} ({}) vs {}",
                        dist.family(),
                        dist.params_label(),
                        ratios[0].baseline
                    ),
                    &sizes,
                    &rows,
                    &RATIO_STATS,
                    lookup,
                );
                files.push(write_file(&opts.out_dir, &format!("ratio_{slug}.md"), &md)?);
            }
        }
        if opts.format.wants_json() {
            let json = serde_json::to_string_pretty(&ratios)? + "\n";
            files.push(write_file(&opts.out_dir, "ratios.json", &json)?);
        }
    }

    if opts.dump_raw {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["family", "params", "measure", "param", "n", "trial", "estimate"])?;
        for cell in &results.cells {
            for (trial, est) in cell.estimates.iter().enumerate() {
                w.write_record([
                    cell.dist.family(),
                    &cell.dist.params_label(),
                    cell.measure.label(),
                    &fmt_full(Some(cell.measure.param())),
                    &cell.n.to_string(),
                    &trial.to_string(),
                    &fmt_full(Some(*est)),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        files.push(write_file(
            &opts.out_dir,
            "raw_estimates.csv",
            &String::from_utf8(bytes).expect("csv output is utf8"),
        )?);
    }

    Ok(RunSummary {
        files,
        wall: started.elapsed(),
        threads_used: opts.threads.unwrap_or_else(rayon::current_num_threads),
        cells: results.cells.len(),
    })
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, content)?;
    Ok(path)
}

/// The calibration note recorded whenever the standardized two-piece
/// normal is part of a run.
pub fn skewed_calibration_note() -> String {
    format!(
        "2pn calibration: literal parameters (mu=0, sigma1=1.3, sigma2=0.65) give mean -0.5186, \
         variance 0.9985, skewness -0.4992 by quadrature, i.e. a nonzero mean and a heavy lower \
         piece. The experiment instead uses the mirrored law standardized to zero mean and unit \
         variance: mu={SKEWED_MU}, sigma1={SKEWED_SIGMA1}, sigma2={SKEWED_SIGMA2} \
         (quadrature moments: skewness +0.4992, kurtosis 3.1829)."
    )
}

fn uses_standard_skewed(config: &ExperimentConfig) -> bool {
    config.distributions.iter().any(|d| {
        matches!(d, DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 }
            if *mu == SKEWED_MU && *sigma1 == SKEWED_SIGMA1 && *sigma2 == SKEWED_SIGMA2)
    })
}

/// Human-readable run manifest, printed to stdout after a run.
pub fn render_manifest(config: &ExperimentConfig, summary: &RunSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "riskprec {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "seed: {}", config.master_seed);
    let _ = writeln!(out, "trials: {}", config.trials);
    let _ = writeln!(
        out,
        "sample sizes: {}",
        config
            .sample_sizes
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(
        out,
        "alphas: {}",
        config
            .alphas
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(
        out,
        "risk aversions: {}",
        config
            .aras
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(out, "common random numbers: {}", config.common_random_numbers);
    let _ = writeln!(out, "distributions:");
    for d in &config.distributions {
        let _ = writeln!(out, "  - {} ({})", d.family(), d.params_label());
    }
    if uses_standard_skewed(config) {
        let _ = writeln!(out, "note: {}", skewed_calibration_note());
    }
    let _ = writeln!(out, "threads: {}", summary.threads_used);
    let _ = writeln!(out, "cells: {}", summary.cells);
    let _ = writeln!(out, "wall time: {:.2} s", summary.wall.as_secs_f64());
    let _ = writeln!(out, "files written: {}", summary.files.len());
    for f in &summary.files {
        let _ = writeln!(out, "  {}", f.display());
    }
    out
}

/// One true-value row.
#[derive(Debug, Clone, Serialize)]
pub struct TrueValueRow {
    pub family: String,
    pub params: String,
    pub measure: &'static str,
    pub param: f64,
    pub value: f64,
}

/// True measure values for every (distribution, measure) pair in the
/// config.
pub fn true_values(config: &ExperimentConfig) -> Result<Vec<TrueValueRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for dist in &config.distributions {
        for m in config.measures(&MeasureKind::ALL) {
            let value = match m {
                RiskMeasure::Var { alpha } => true_var(dist, alpha)?,
                RiskMeasure::Es { alpha } => true_es(dist, alpha)?,
                RiskMeasure::Srm { k } => true_srm(dist, k)?,
            };
            rows.push(TrueValueRow {
                family: dist.family().to_string(),
                params: dist.params_label(),
                measure: m.label(),
                param: m.param(),
                value,
            });
        }
    }
    Ok(rows)
}

/// Render true values in the chosen format (`All` falls back to markdown
/// since this goes to stdout).
pub fn render_true_values(rows: &[TrueValueRow], format: FormatChoice) -> Result<String> {
    match format {
        FormatChoice::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        FormatChoice::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["family", "params", "measure", "param", "n", "stat", "value"])?;
            for r in rows {
                w.write_record([
                    r.family.as_str(),
                    r.params.as_str(),
                    r.measure,
                    &fmt_full(Some(r.param)),
                    "",
                    "true_value",
                    &fmt_full(Some(r.value)),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf8"))
        }
        FormatChoice::Markdown | FormatChoice::All => {
            let mut out = String::new();
            let _ = writeln!(out, "| family | params | measure | param | value |");
            let _ = writeln!(out, "|---|---|---|---|---|");
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    r.family,
                    r.params,
                    r.measure,
                    fmt4(Some(r.param)),
                    fmt4(Some(r.value))
                );
            }
            Ok(out)
        }
    }
}

/// Cell selector for the histogram command.
#[derive(Debug, Clone)]
pub struct CellSelector {
    pub family: Option<String>,
    pub params: Option<String>,
    pub measure: MeasureKind,
    pub param: f64,
    pub n: usize,
}

/// Histogram bins over the estimate range: (left, right, count). A
/// degenerate range collapses to a single occupied bin.
pub fn histogram(estimates: &[f64], bins: usize) -> Result<Vec<(f64, f64, usize)>> {
    if bins < 10 {
        return Err(Error::bad_param("bins", format!("need at least 10, got {bins}")));
    }
    if estimates.is_empty() {
        return Err(Error::InvalidSample("no estimates to bin".into()));
    }
    let min = estimates.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = estimates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidSample("non-finite estimate".into()));
    }
    if min == max {
        return Ok(vec![(min, max, estimates.len())]);
    }
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in estimates {
        let idx = (((x - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let left = min + i as f64 * width;
            let right = if i + 1 == bins {
                max
            } else {
                min + (i + 1) as f64 * width
            };
            (left, right, c)
        })
        .collect())
}

/// What the histogram command hands back: the matched distribution, the
/// bin rows as (left, right, count), and the cell's shape moments.
pub type HistogramCell = (DistributionSpec, Vec<(f64, f64, usize)>, Option<f64>, Option<f64>);

/// Resolve a selector against the config, run just that cell, and write
/// the histogram file.
pub fn cmd_histogram(
    config: &ExperimentConfig,
    selector: &CellSelector,
    bins: usize,
    threads: Option<usize>,
    out_path: &Path,
) -> Result<HistogramCell> {
    config.validate()?;
    let matches: Vec<(usize, &DistributionSpec)> = config
        .distributions
        .iter()
        .enumerate()
        .filter(|(_, d)| {
            selector
                .family
                .as_deref()
                .is_none_or(|f| d.family() == f)
                && selector
                    .params
                    .as_deref()
                    .is_none_or(|p| d.params_label() == p)
        })
        .collect();
    if matches.len() != 1 {
        let listing: Vec<String> = matches
            .iter()
            .map(|(i, d)| format!("{i}: {} ({})", d.family(), d.params_label()))
            .collect();
        return Err(Error::Config(if matches.is_empty() {
            "selector matches no configured distribution".to_string()
        } else {
            format!(
                "selector is ambiguous, matches {} distributions:\n  {}",
                matches.len(),
                listing.join("\n  ")
            )
        }));
    }
    let (_, dist) = matches[0];

    if !config.sample_sizes.contains(&selector.n) {
        return Err(Error::Config(format!(
            "n={} is not in the configured grid {:?}",
            selector.n, config.sample_sizes
        )));
    }
    let params_ok = match selector.measure {
        MeasureKind::Var | MeasureKind::Es => config.alphas.contains(&selector.param),
        MeasureKind::Srm => config.aras.contains(&selector.param),
    };
    if !params_ok {
        return Err(Error::Config(format!(
            "param {} is not in the configured grid for {}",
            selector.param,
            selector.measure.label()
        )));
    }

    let measure = match selector.measure {
        MeasureKind::Var => RiskMeasure::Var { alpha: selector.param },
        MeasureKind::Es => RiskMeasure::Es { alpha: selector.param },
        MeasureKind::Srm => RiskMeasure::Srm { k: selector.param },
    };
    let cells = with_thread_pool(threads, || {
        run_cell(config, dist, selector.n, &[selector.measure])
    })?;
    let cell = cells
        .iter()
        .find(|c| c.measure == measure)
        .ok_or_else(|| Error::Config("requested measure missing from cell run".into()))?;

    let stats = moment_stats(&cell.estimates)?;
    let rows = histogram(&cell.estimates, bins)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_left", "bin_right", "count", "skewness", "kurtosis"])?;
    for (left, right, count) in &rows {
        w.write_record([
            &fmt_full(Some(*left)),
            &fmt_full(Some(*right)),
            &count.to_string(),
            &fmt_full(stats.skewness),
            &fmt_full(stats.kurtosis),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(out_path, String::from_utf8(bytes).expect("csv output is utf8"))?;

    Ok((dist.clone(), rows, stats.skewness, stats.kurtosis))
}

/// Parse a loss file: one finite real per line, blank lines allowed.
pub fn read_loss_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|_| Error::LossParse {
            path: path.display().to_string(),
            line: i + 1,
            text: trimmed.to_string(),
        })?;
        if !v.is_finite() {
            return Err(Error::LossParse {
                path: path.display().to_string(),
                line: i + 1,
                text: trimmed.to_string(),
            });
        }
        out.push(v);
    }
    if out.len() < 2 {
        return Err(Error::InvalidSample(format!(
            "{}: need at least 2 losses, got {}",
            path.display(),
            out.len()
        )));
    }
    Ok(out)
}

/// Estimate every configured measure on a loss sample from a file. Cells
/// whose tail is too small for the sample report `undef` rather than
/// aborting the rest.
pub fn cmd_estimate(path: &Path, alphas: &[f64], aras: &[f64]) -> Result<String> {
    let losses = read_loss_file(path)?;
    let n = losses.len();
    let sample = SortedSample::new(losses)?;
    let mut out = String::new();
    let _ = writeln!(out, "n = {n}");
    let _ = writeln!(out, "| measure | param | estimate |");
    let _ = writeln!(out, "|---|---|---|");
    let mut push = |measure: &str, param: f64, value: Result<f64>| -> Result<()> {
        let text = match value {
            Ok(v) => fmt4(Some(v)),
            Err(Error::InsufficientTail { .. }) => "undef (tail too small)".to_string(),
            Err(e) => return Err(e),
        };
        let _ = writeln!(out, "| {measure} | {} | {text} |", fmt4(Some(param)));
        Ok(())
    };
    for &alpha in alphas {
        push("var", alpha, estimate_var(&sample, alpha))?;
    }
    for &alpha in alphas {
        push("es", alpha, estimate_es(&sample, alpha))?;
    }
    for &k in aras {
        push("srm", k, estimate_srm(&sample, k))?;
    }
    Ok(out)
}
