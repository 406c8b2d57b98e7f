// Usage: cargo run --release --example ratio_tables
//
// How much precision heavy tails and skew cost: standardized-SE ratios of
// the Student t(5) and the skewed two-piece normal against the standard
// normal baseline, cell by cell. Ratios above 1 mean the normal's
// estimator is relatively more precise.

use riskprec::mc_engine::{run_experiment, ExperimentConfig};
use riskprec::reporting::{ratio_reports, summarize};

fn main() -> riskprec::Result<()> {
    let config = ExperimentConfig::standard();
    let results = run_experiment(&config)?;
    let reports = summarize(&results)?;
    let ratios = ratio_reports(&config, &reports);

    let mut current = String::new();
    for r in &ratios {
        if r.family != current {
            current = r.family.clone();
            println!("\nstd-se ratio, {} vs {}", current, r.baseline);
            println!("| measure | param | n | ratio |");
            println!("|---|---|---|---|");
        }
        println!(
            "| {} | {} | {} | {:.3} |",
            r.measure,
            r.param,
            r.n,
            r.std_se_ratio.unwrap()
        );
    }
    Ok(())
}
