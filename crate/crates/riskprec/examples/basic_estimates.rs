// Usage: cargo run --example basic_estimates
//
// Point estimates of the three risk measures from a raw loss sample.

use riskprec::estimators::{estimate_es, estimate_srm, estimate_var, SortedSample};

fn main() -> riskprec::Result<()> {
    // A year of daily losses, say. Order does not matter; SortedSample sorts.
    let losses = vec![
        1.2, -0.4, 0.9, 2.7, -1.1, 0.3, 3.8, 0.0, -0.7, 1.5, 2.2, -0.2, 0.8, 4.6, 1.9, -1.4, 0.6,
        2.9, 1.1, -0.9, 0.4, 5.2, 1.7, -0.5, 2.4, 0.2, -1.8, 3.1, 1.3, 0.7,
    ];
    let sample = SortedSample::new(losses)?;

    for alpha in [0.8, 0.9] {
        let var = estimate_var(&sample, alpha)?;
        let es = estimate_es(&sample, alpha)?;
        println!("alpha = {alpha}: VaR = {var:.4}, ES = {es:.4}");
    }
    for k in [1.0, 5.0, 25.0] {
        let srm = estimate_srm(&sample, k)?;
        println!("risk aversion k = {k}: spectral measure = {srm:.4}");
    }
    Ok(())
}
