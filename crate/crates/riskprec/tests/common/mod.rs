//! Deterministic estimator invariants shared by the property suite and the
//! acceptance gate. Each function panics with a descriptive message on the
//! first violation.

use riskprec::distributions::{norm_quantile, DistributionSpec};
use riskprec::estimators::{estimate_es, estimate_srm, estimate_var, srm_weights, SortedSample};
use riskprec::mc_engine::{SKEWED_MU, SKEWED_SIGMA1, SKEWED_SIGMA2};
use riskprec::rng::RandomStream;
use riskprec::stats::moment_stats;

/// Mixed absolute/relative closeness, since estimates in these tests range
/// from near zero to a few hundred.
pub fn assert_close(got: f64, want: f64, abs: f64, rel: f64, what: &str) {
    let tol = abs + rel * want.abs();
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (diff {:.3e}, tol {:.3e})",
        (got - want).abs(),
        tol
    );
}

/// Draws `n` roughly normal values from a seeded stream. Distinct with
/// probability one, which keeps order statistics unambiguous.
fn random_sample(stream: &mut RandomStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| norm_quantile(stream.next_open01())).collect()
}

pub fn affine_equivariance_1000() {
    let alphas = [0.9, 0.95];
    let aversions = [1.0, 5.0, 25.0, 100.0];
    let mut stream = RandomStream::derive(20240517, 1, 0, 0);
    for iter in 0..1000 {
        let n = 20 + (stream.next_open01() * 381.0) as usize;
        let values = random_sample(&mut stream, n);
        let sample = SortedSample::new(values.clone()).unwrap();
        let alpha = alphas[iter % alphas.len()];
        let k = aversions[iter % aversions.len()];

        let a = 0.1 + 5.0 * stream.next_open01();
        let b = 10.0 * (stream.next_open01() - 0.5);
        let scaled: Vec<f64> = values.iter().map(|&v| a * v + b).collect();
        let scaled = SortedSample::new(scaled).unwrap();

        // VaR is a single order statistic, so the transformed estimate is the
        // transformed value of the same element, bit for bit.
        let var = estimate_var(&sample, alpha).unwrap();
        assert_eq!(estimate_var(&scaled, alpha).unwrap(), a * var + b);

        let es = estimate_es(&sample, alpha).unwrap();
        assert_close(
            estimate_es(&scaled, alpha).unwrap(),
            a * es + b,
            1e-10,
            1e-12,
            "es affine",
        );

        // Spectral weights sum to slightly more than one, so a shift of c
        // moves the estimate by c times the weight sum, not by c.
        let srm = estimate_srm(&sample, k).unwrap();
        let w_sum: f64 = srm_weights(n, k).unwrap().iter().sum();
        assert_close(
            estimate_srm(&scaled, k).unwrap(),
            a * srm + b * w_sum,
            1e-10,
            1e-12,
            "srm affine",
        );
    }
}

pub fn es_dominates_var_1000() {
    let mut stream = RandomStream::derive(20240517, 2, 0, 0);
    for iter in 0..1000 {
        let n = 20 + (stream.next_open01() * 381.0) as usize;
        let sample = SortedSample::new(random_sample(&mut stream, n)).unwrap();
        let alpha = [0.9, 0.95][iter % 2];
        let var = estimate_var(&sample, alpha).unwrap();
        let es = estimate_es(&sample, alpha).unwrap();
        // A mean of values each >= var can only round below it by ulps.
        assert!(
            es >= var - 1e-12 * (1.0 + var.abs()),
            "es {es} < var {var} at n={n} alpha={alpha}"
        );
    }
}

/// The estimators restated from their definitions, index by index, for
/// samples small enough to audit by hand.
pub fn brute_force_small_n() {
    let mut stream = RandomStream::derive(20240517, 3, 0, 0);
    for n in 2..=12usize {
        let sample = SortedSample::new(random_sample(&mut stream, n)).unwrap();
        let v = sample.as_slice();
        for j in 1..n {
            let alpha = 1.0 - j as f64 / n as f64;
            // The (j+1)-th highest observation.
            assert_eq!(estimate_var(&sample, alpha).unwrap(), v[n - 1 - j]);
            // Mean of the j+1 highest, summed from the top down.
            let brute_es = v[n - 1 - j..].iter().rev().sum::<f64>() / (j + 1) as f64;
            assert_close(
                estimate_es(&sample, alpha).unwrap(),
                brute_es,
                0.0,
                1e-13,
                "brute es",
            );
        }
        for k in [0.5f64, 5.0, 50.0] {
            let denom = 1.0 - (-k).exp();
            let brute_srm: f64 = (1..=n)
                .map(|i| k / n as f64 * (-k * (1.0 - i as f64 / n as f64)).exp() / denom * v[i - 1])
                .sum();
            assert_close(
                estimate_srm(&sample, k).unwrap(),
                brute_srm,
                0.0,
                1e-12,
                "brute srm",
            );
        }
    }
}

/// Spectral weights are positive, strictly increasing toward the worst
/// loss, and sum to the closed form (k/n) / (1 - exp(-k/n)).
pub fn weights_shape_and_closed_form_sum() {
    for n in [1usize, 2, 3, 10, 100, 250, 999, 1500] {
        for k in [0.01f64, 0.5, 5.0, 50.0, 400.0] {
            let w = srm_weights(n, k).unwrap();
            assert_eq!(w.len(), n);
            assert!(w[0] > 0.0, "w[0]={} at n={n} k={k}", w[0]);
            for i in 1..n {
                assert!(w[i] > w[i - 1], "weights not increasing at n={n} k={k} i={i}");
            }
            let nf = n as f64;
            let closed = (k / nf) / -(-k / nf).exp_m1();
            let sum: f64 = w.iter().sum();
            assert!(
                ((sum - closed) / closed).abs() <= 1e-12,
                "weight sum {sum} vs closed form {closed} at n={n} k={k}"
            );
        }
    }
}

pub fn srm_mean_and_max_limits() {
    let mut stream = RandomStream::derive(20240517, 4, 0, 0);
    for _ in 0..50 {
        let n = 50 + (stream.next_open01() * 451.0) as usize;
        let values = random_sample(&mut stream, n);
        let mean = values.iter().sum::<f64>() / n as f64;
        let sample = SortedSample::new(values).unwrap();
        let srm = estimate_srm(&sample, 1e-6).unwrap();
        assert_close(srm, mean, 1e-3, 1e-3, "srm mean limit");
    }

    // The gap to the maximum is about span/k, so a unit-span grid with
    // k = 1000 should land within 1e-3. The grid must also be much finer
    // than 1/k or discretization dominates.
    let n = 1_000_000;
    let values: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let sample = SortedSample::new(values).unwrap();
    let srm = estimate_srm(&sample, 1000.0).unwrap();
    assert!((srm - 1.0).abs() <= 1e-3, "srm {srm} should approach max 1");
}

pub fn round_trip_deep_tails() {
    let dists = [
        DistributionSpec::normal(0.0, 1.0).unwrap(),
        DistributionSpec::normal(5.0, 1.0).unwrap(),
        DistributionSpec::normal(0.0, 5.0).unwrap(),
        DistributionSpec::two_piece_normal(SKEWED_MU, SKEWED_SIGMA1, SKEWED_SIGMA2).unwrap(),
        DistributionSpec::two_piece_normal(1.0, 2.0, 0.5).unwrap(),
        DistributionSpec::standardized_t(5).unwrap(),
        DistributionSpec::standardized_t(8).unwrap(),
        DistributionSpec::standardized_t(30).unwrap(),
    ];
    let ps = [
        1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999,
        1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8, 1.0 - 1e-10,
    ];
    for dist in &dists {
        for &p in &ps {
            let x = dist.quantile(p).unwrap();
            let back = dist.cdf(x);
            assert!(
                (back - p).abs() <= 1e-9,
                "{}({}) round trip: p={p:e} -> x={x} -> {back:e}",
                dist.family(),
                dist.params_label()
            );
        }
    }
}

pub fn moments_match_simulation() {
    let n = 1_000_000usize;
    let dists = [
        DistributionSpec::normal(0.0, 1.0).unwrap(),
        DistributionSpec::two_piece_normal(SKEWED_MU, SKEWED_SIGMA1, SKEWED_SIGMA2).unwrap(),
        DistributionSpec::standardized_t(5).unwrap(),
    ];
    let mut buf = vec![0.0; n];
    for (idx, dist) in dists.iter().enumerate() {
        let truth = dist.analytic_moments().unwrap();
        let mut stream = RandomStream::derive(20240517, 5, n as u64, idx as u64);
        dist.sample_into(&mut stream, &mut buf);
        let got = moment_stats(&buf).unwrap();

        let root_n = (n as f64).sqrt();
        let se_mean = truth.variance.sqrt() / root_n;
        assert!(
            (got.mean - truth.mean).abs() <= 5.0 * se_mean,
            "{}: mean {} vs {} (se {se_mean:.2e})",
            dist.family(),
            got.mean,
            truth.mean
        );
        // Var(sample variance) ~ sigma^4 (kurt - 1) / n, finite for every
        // family here because all have a fourth moment.
        let se_var = truth.variance * ((truth.kurtosis - 1.0) / n as f64).sqrt();
        assert!(
            (got.sd * got.sd - truth.variance).abs() <= 5.0 * se_var,
            "{}: variance {} vs {} (se {se_var:.2e})",
            dist.family(),
            got.sd * got.sd,
            truth.variance
        );

        let skew = got.skewness.unwrap();
        let kurt = got.kurtosis.unwrap();
        if let DistributionSpec::StandardizedT { .. } = dist {
            // Sample skewness and kurtosis have infinite sampling variance at
            // nu = 5 (they need sixth and eighth moments), so only coarse
            // bands make sense.
            assert!(skew.abs() < 2.0, "t skewness {skew}");
            assert!(kurt > 4.0 && kurt < 100.0, "t kurtosis {kurt}");
        } else {
            // Normal-theory standard errors, doubled as slack for the mildly
            // non-normal two-piece case.
            let se_skew = (6.0 / n as f64).sqrt();
            let se_kurt = (24.0 / n as f64).sqrt();
            assert!(
                (skew - truth.skewness).abs() <= 10.0 * se_skew,
                "{}: skewness {} vs {}",
                dist.family(),
                skew,
                truth.skewness
            );
            assert!(
                (kurt - truth.kurtosis).abs() <= 10.0 * se_kurt,
                "{}: kurtosis {} vs {}",
                dist.family(),
                kurt,
                truth.kurtosis
            );
        }
    }
}
