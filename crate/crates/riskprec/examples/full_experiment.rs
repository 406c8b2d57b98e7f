// Usage: cargo run --release --example full_experiment
//
// The complete default experiment: three distributions, four sample sizes,
// all nine measure settings, 10000 trials per cell. Writes every report
// (moments, precision, ratio tables, machine-readable json) under
// ./riskprec_out and prints the run manifest.

use riskprec::mc_engine::{ExperimentConfig, MeasureKind};
use riskprec::reporting::{cmd_run, render_manifest, FormatChoice, RunOptions};

fn main() -> riskprec::Result<()> {
    let opts = RunOptions {
        config: ExperimentConfig::standard(),
        out_dir: "riskprec_out".into(),
        format: FormatChoice::All,
        kinds: MeasureKind::ALL.to_vec(),
        threads: None,
        dump_raw: false,
    };
    let summary = cmd_run(&opts)?;
    print!("{}", render_manifest(&opts.config, &summary));
    Ok(())
}
