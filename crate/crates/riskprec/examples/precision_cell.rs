// Usage: cargo run --release --example precision_cell
//
// Monte Carlo precision diagnostics for a single cell: the 99% VaR
// estimator on standard normal samples of 250 observations. Shows the
// moment diagnostics of the estimator's sampling distribution and the
// standardized precision statistics built from them.

use riskprec::analytic::true_var;
use riskprec::distributions::DistributionSpec;
use riskprec::mc_engine::{ExperimentConfig, MeasureKind};
use riskprec::reporting::{summarize, CI_LEVEL};

fn main() -> riskprec::Result<()> {
    let config = ExperimentConfig {
        alphas: vec![0.99],
        sample_sizes: vec![250],
        distributions: vec![DistributionSpec::normal(0.0, 1.0)?],
        ..ExperimentConfig::standard()
    };
    let results = riskprec::mc_engine::run_experiment_with(&config, &[MeasureKind::Var])?;
    let report = &summarize(&results)?[0];

    let truth = true_var(&config.distributions[0], 0.99)?;
    println!("cell: {} var 0.99, n = {}, trials = {}", report.family, report.n, config.trials);
    println!("true value      {truth:.4}");
    println!("mean estimate   {:.4} (bias {:+.4})", report.mean, report.mean - truth);
    println!("sd              {:.4}", report.sd);
    println!("skewness        {:.4}", report.skewness.unwrap());
    println!("kurtosis        {:.4}", report.kurtosis.unwrap());
    println!("JB p-value      {:.4}", report.jb_pvalue.unwrap());
    println!("standardized se {:.4}", report.std_se.unwrap());
    println!(
        "standardized {:.0}% ci [{:.4}, {:.4}]",
        CI_LEVEL * 100.0,
        report.ci_lb.unwrap(),
        report.ci_ub.unwrap()
    );
    Ok(())
}
