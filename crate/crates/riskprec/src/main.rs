//! Thin command-line wrapper over the library operations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use riskprec::mc_engine::{ExperimentConfig, MeasureKind};
use riskprec::reporting::{
    self, CellSelector, FormatChoice, RunOptions, RunSummary,
};
use riskprec::Result;

#[derive(Parser)]
#[command(name = "riskprec", version, about = "Risk-measure estimation and estimator precision")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config file (JSON); defaults to the built-in standard grid
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads (fallback: RISKPREC_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => ExperimentConfig::standard(),
        };
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment grid and write moment, precision, and ratio tables
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Output format (default: all of csv, json, markdown)
        #[arg(long)]
        format: Option<String>,
        /// Comma-separated subset of measures: var, es, srm
        #[arg(long, value_delimiter = ',')]
        measures: Vec<String>,
        /// Override the confidence levels
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        /// Override the risk-aversion coefficients
        #[arg(long, value_delimiter = ',')]
        aras: Vec<f64>,
        /// Override the sample sizes
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Also write every raw trial estimate (large)
        #[arg(long)]
        dump_raw: bool,
    },
    /// Print the true measure values under each configured distribution
    TrueValues {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output format: csv, json, or markdown
        #[arg(long, default_value = "markdown")]
        format: String,
    },
    /// Write histogram bin data for one estimator cell
    Histogram {
        #[command(flatten)]
        config: ConfigArgs,
        /// Distribution family: normal, 2pn, std_t
        #[arg(long)]
        family: Option<String>,
        /// Exact parameter label, e.g. "mu=0;sigma=1", to disambiguate
        #[arg(long)]
        params: Option<String>,
        /// Measure: var, es, or srm
        #[arg(long)]
        measure: String,
        /// Measure parameter: the level for var/es, risk aversion for srm
        #[arg(long)]
        param: f64,
        /// Sample size of the cell
        #[arg(long)]
        n: usize,
        /// Number of bins
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Output file
        #[arg(long, default_value = "histogram.csv")]
        out: PathBuf,
    },
    /// Estimate the configured measures on a loss file (one loss per line)
    Estimate {
        /// Loss file path
        file: PathBuf,
        /// Confidence levels for VaR and ES
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        /// Risk-aversion coefficients for the spectral measure
        #[arg(long, value_delimiter = ',')]
        aras: Vec<f64>,
    },
}

fn parse_kinds(measures: &[String]) -> Result<Vec<MeasureKind>> {
    if measures.is_empty() {
        return Ok(MeasureKind::ALL.to_vec());
    }
    measures.iter().map(|m| m.parse()).collect()
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            format,
            measures,
            alphas,
            aras,
            n,
            dump_raw,
        } => {
            let mut cfg = config.load()?;
            if !alphas.is_empty() {
                cfg.alphas = alphas;
            }
            if !aras.is_empty() {
                cfg.aras = aras;
            }
            if !n.is_empty() {
                cfg.sample_sizes = n;
            }
            let format = match format {
                Some(f) => f.parse()?,
                None => FormatChoice::All,
            };
            let opts = RunOptions {
                threads: reporting::resolve_threads(config.threads)?,
                config: cfg,
                out_dir: out,
                format,
                kinds: parse_kinds(&measures)?,
                dump_raw,
            };
            let summary: RunSummary = reporting::cmd_run(&opts)?;
            print!("{}", reporting::render_manifest(&opts.config, &summary));
            Ok(())
        }
        Command::TrueValues { config, format } => {
            let cfg = config.load()?;
            let rows = reporting::true_values(&cfg)?;
            print!("{}", reporting::render_true_values(&rows, format.parse()?)?);
            Ok(())
        }
        Command::Histogram {
            config,
            family,
            params,
            measure,
            param,
            n,
            bins,
            out,
        } => {
            let cfg = config.load()?;
            let selector = CellSelector {
                family,
                params,
                measure: measure.parse()?,
                param,
                n,
            };
            let threads = reporting::resolve_threads(config.threads)?;
            let (dist, rows, skew, kurt) =
                reporting::cmd_histogram(&cfg, &selector, bins, threads, &out)?;
            println!(
                "wrote {} bins for {} ({}) {} {} n={} to {}",
                rows.len(),
                dist.family(),
                dist.params_label(),
                selector.measure.label(),
                param,
                n,
                out.display()
            );
            match (skew, kurt) {
                (Some(s), Some(k)) => println!("skewness {s:.4}, kurtosis {k:.4}"),
                _ => println!("skewness undef, kurtosis undef"),
            }
            Ok(())
        }
        Command::Estimate { file, alphas, aras } => {
            let defaults = ExperimentConfig::standard();
            let alphas = if alphas.is_empty() { defaults.alphas } else { alphas };
            let aras = if aras.is_empty() { defaults.aras } else { aras };
            print!("{}", reporting::cmd_estimate(&file, &alphas, &aras)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
