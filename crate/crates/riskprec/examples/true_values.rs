// Usage: cargo run --example true_values
//
// Analytic (population) values of every measure in the standard grid, the
// targets the Monte Carlo estimators are judged against.

use riskprec::mc_engine::ExperimentConfig;
use riskprec::reporting::{render_true_values, true_values, FormatChoice};

fn main() -> riskprec::Result<()> {
    let config = ExperimentConfig::standard();
    let rows = true_values(&config)?;
    print!("{}", render_true_values(&rows, FormatChoice::Markdown)?);
    Ok(())
}
