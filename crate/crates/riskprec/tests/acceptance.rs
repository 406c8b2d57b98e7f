//! Release gate for the default experiment: one test per criterion, so the
//! harness prints one pass/fail line for each. Golden cells are regression
//! targets for the shipped seed; the tolerances allow for Monte Carlo
//! scatter at 10000 trials, not for estimator drift.

mod common;

use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use riskprec::mc_engine::{run_experiment, ExperimentConfig, MeasureKind};
use riskprec::reporting::{
    cmd_run, ratio_reports, summarize, CellReport, FormatChoice, RatioReport, RunOptions,
};
use riskprec::stats::jarque_bera;
use tempfile::TempDir;

const NS: [usize; 4] = [250, 500, 1000, 2000];
const ALPHAS: [f64; 3] = [0.9, 0.95, 0.99];
const ARAS: [f64; 3] = [5.0, 25.0, 100.0];

/// Target statistics for one conditioning parameter across the four sample
/// sizes: mean, standardized SE, and standardized 90% CI bounds.
struct Golden {
    param: f64,
    means: [f64; 4],
    std_ses: [f64; 4],
    cis: [(f64, f64); 4],
}

const GOLDEN_VAR: [Golden; 3] = [
    Golden {
        param: 0.9,
        means: [1.2670, 1.2739, 1.2780, 1.2802],
        std_ses: [0.0857, 0.0591, 0.0426, 0.0301],
        cis: [
            (0.8605, 1.1447),
            (0.9048, 1.0991),
            (0.9306, 1.0707),
            (0.9506, 1.0494),
        ],
    },
    Golden {
        param: 0.95,
        means: [1.6409, 1.6333, 1.6390, 1.6425],
        std_ses: [0.0817, 0.0568, 0.0403, 0.0285],
        cis: [
            (0.8706, 1.1367),
            (0.9079, 1.0964),
            (0.9342, 1.0679),
            (0.9529, 1.0466),
        ],
    },
    Golden {
        param: 0.99,
        means: [2.3169, 2.2867, 2.3063, 2.3161],
        std_ses: [0.1003, 0.0710, 0.0499, 0.0356],
        cis: [
            (0.8481, 1.1747),
            (0.8881, 1.1236),
            (0.9210, 1.0852),
            (0.9430, 1.0601),
        ],
    },
];

const GOLDEN_ES: [Golden; 3] = [
    Golden {
        param: 0.9,
        means: [1.7260, 1.7400, 1.7480, 1.7516],
        std_ses: [0.0697, 0.0490, 0.0345, 0.0246],
        cis: [
            (0.8865, 1.1160),
            (0.9208, 1.0821),
            (0.9438, 1.0576),
            (0.9594, 1.0403),
        ],
    },
    Golden {
        param: 0.95,
        means: [2.0294, 2.0373, 2.0509, 2.0565],
        std_ses: [0.0755, 0.0537, 0.0375, 0.0267],
        cis: [
            (0.8799, 1.1267),
            (0.9123, 1.0892),
            (0.9392, 1.0633),
            (0.9564, 1.0441),
        ],
    },
    Golden {
        param: 0.99,
        means: [2.5457, 2.5727, 2.6185, 2.6399],
        std_ses: [0.1030, 0.0741, 0.0528, 0.0380],
        cis: [
            (0.8438, 1.1762),
            (0.8815, 1.1271),
            (0.9175, 1.0900),
            (0.9394, 1.0633),
        ],
    },
];

const GOLDEN_SRM: [Golden; 3] = [
    Golden {
        param: 5.0,
        means: [1.0863, 1.0837, 1.0831, 1.0825],
        std_ses: [0.0770, 0.0537, 0.0379, 0.0270],
        cis: [
            (0.8740, 1.1263),
            (0.9123, 1.0901),
            (0.9378, 1.0633),
            (0.9552, 1.0443),
        ],
    },
    Golden {
        param: 25.0,
        means: [2.0326, 1.9931, 1.9750, 1.9647],
        std_ses: [0.0733, 0.0522, 0.0364, 0.0259],
        cis: [
            (0.8824, 1.1243),
            (0.9153, 1.0869),
            (0.9406, 1.0609),
            (0.9571, 1.0430),
        ],
    },
    Golden {
        param: 100.0,
        means: [2.9583, 2.7264, 2.6166, 2.5597],
        std_ses: [0.0954, 0.0691, 0.0483, 0.0344],
        cis: [
            (0.8530, 1.1628),
            (0.8889, 1.1182),
            (0.9239, 1.0821),
            (0.9442, 1.0577),
        ],
    },
];

/// The default experiment, summarized once and shared by the golden-cell,
/// ratio, and normality criteria.
fn default_run() -> &'static (Vec<CellReport>, Vec<RatioReport>) {
    static RUN: OnceLock<(Vec<CellReport>, Vec<RatioReport>)> = OnceLock::new();
    RUN.get_or_init(|| {
        let config = ExperimentConfig::standard();
        let results = run_experiment(&config).expect("default experiment");
        let reports = summarize(&results).expect("summaries");
        let ratios = ratio_reports(&config, &reports);
        (reports, ratios)
    })
}

/// Three normals sharing draws: the baseline, a location shift, and a scale
/// blow-up. Used by the invariance criterion.
fn location_scale_run() -> &'static Vec<CellReport> {
    static RUN: OnceLock<Vec<CellReport>> = OnceLock::new();
    RUN.get_or_init(|| {
        let config = ExperimentConfig::location_scale_suite();
        let results = run_experiment(&config).expect("location-scale experiment");
        summarize(&results).expect("summaries")
    })
}

/// Three full artifact trees from the same default config: two at eight
/// threads (a rerun pair) and one single-threaded.
struct Trees {
    _dir: TempDir,
    first: PathBuf,
    rerun: PathBuf,
    single: PathBuf,
    names: Vec<String>,
}

fn artifact_trees() -> &'static Trees {
    static TREES: OnceLock<Trees> = OnceLock::new();
    TREES.get_or_init(|| {
        let dir = TempDir::new().expect("tempdir");
        let run = |sub: &str, threads: usize| {
            let out = dir.path().join(sub);
            let summary = cmd_run(&RunOptions {
                config: ExperimentConfig::standard(),
                out_dir: out.clone(),
                format: FormatChoice::All,
                kinds: MeasureKind::ALL.to_vec(),
                threads: Some(threads),
                dump_raw: false,
            })
            .expect("cmd_run");
            let names = summary
                .files
                .iter()
                .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
                .collect();
            (out, names)
        };
        let (first, names) = run("first", 8);
        let (rerun, _) = run("rerun", 8);
        let (single, _) = run("single", 1);
        Trees {
            _dir: dir,
            first,
            rerun,
            single,
            names,
        }
    })
}

fn cell<'a>(
    reports: &'a [CellReport],
    dist_index: usize,
    measure: &str,
    param: f64,
    n: usize,
) -> &'a CellReport {
    reports
        .iter()
        .find(|r| {
            r.dist_index == dist_index
                && r.measure == measure
                && (r.param - param).abs() < 1e-12
                && r.n == n
        })
        .unwrap_or_else(|| panic!("missing cell dist={dist_index} {measure} {param} n={n}"))
}

fn ratio<'a>(
    ratios: &'a [RatioReport],
    family: &str,
    measure: &str,
    param: f64,
    n: usize,
) -> &'a RatioReport {
    ratios
        .iter()
        .find(|r| {
            r.family == family
                && r.measure == measure
                && (r.param - param).abs() < 1e-12
                && r.n == n
        })
        .unwrap_or_else(|| panic!("missing ratio {family} {measure} {param} n={n}"))
}

/// The printed form of a cell statistic, four decimals.
fn p4(x: Option<f64>) -> String {
    format!("{:.4}", x.expect("statistic present"))
}

fn check_golden(measure: &'static str, goldens: &[Golden]) {
    let (reports, _) = default_run();
    for g in goldens {
        for (i, &n) in NS.iter().enumerate() {
            let c = cell(reports, 0, measure, g.param, n);
            // An integer (1-alpha)n pins the order statistic; otherwise the
            // unknown reference rounding rule can move the cell a bit more.
            let mean_tol = if measure == "srm" {
                0.02
            } else {
                let t = (1.0 - g.param) * n as f64;
                if (t - t.round()).abs() < 1e-9 {
                    0.02
                } else {
                    0.04
                }
            };
            let mean_diff = (c.mean - g.means[i]).abs();
            assert!(
                mean_diff <= mean_tol,
                "{measure} {} n={n}: mean {:.4} vs {} (tol {mean_tol})",
                g.param,
                c.mean,
                g.means[i]
            );
            let se = c.std_se.expect("std se");
            let se_rel = (se / g.std_ses[i] - 1.0).abs();
            assert!(
                se_rel <= 0.07,
                "{measure} {} n={n}: std se {:.4} vs {} ({:.1}% off)",
                g.param,
                se,
                g.std_ses[i],
                100.0 * se_rel
            );
            let (lb, ub) = (c.ci_lb.expect("ci lb"), c.ci_ub.expect("ci ub"));
            let (glb, gub) = g.cis[i];
            assert!(
                (lb - glb).abs() <= 0.01 && (ub - gub).abs() <= 0.01,
                "{measure} {} n={n}: ci ({:.4}, {:.4}) vs ({glb}, {gub})",
                g.param,
                lb,
                ub
            );
        }
    }
}

#[test]
fn criterion_1_normal_var_golden_cells() {
    check_golden("var", &GOLDEN_VAR);
}

#[test]
fn criterion_2_normal_es_and_srm_golden_cells() {
    check_golden("es", &GOLDEN_ES);
    check_golden("srm", &GOLDEN_SRM);
}

#[test]
fn criterion_3_location_scale_invariances() {
    let reports = location_scale_run();
    let baseline: Vec<&CellReport> = reports.iter().filter(|r| r.dist_index == 0).collect();
    assert_eq!(baseline.len(), 36);
    for b in baseline {
        let shifted = cell(reports, 1, b.measure, b.param, b.n);
        let scaled = cell(reports, 2, b.measure, b.param, b.n);

        // Standardized precision columns are scale-free, so the sigma=5 run
        // reprints the baseline column: identical at the four decimals shown
        // and equal to about a dozen digits in full precision (multiplying
        // every draw by 5 perturbs the last bit or two).
        for (stat, b_v, s_v) in [
            ("std_se", b.std_se, scaled.std_se),
            ("ci_lb", b.ci_lb, scaled.ci_lb),
            ("ci_ub", b.ci_ub, scaled.ci_ub),
        ] {
            assert_eq!(
                p4(b_v),
                p4(s_v),
                "{} {} n={}: {stat} prints differently under scaling",
                b.measure,
                b.param,
                b.n
            );
            common::assert_close(s_v.unwrap(), b_v.unwrap(), 0.0, 1e-13, stat);
        }

        // Shape statistics ignore location and scale entirely, so all three
        // distributions agree on them.
        for other in [shifted, scaled] {
            for (stat, b_v, o_v, abs, rel) in [
                ("skewness", b.skewness, other.skewness, 1e-11, 1e-11),
                ("kurtosis", b.kurtosis, other.kurtosis, 1e-11, 1e-11),
                ("jb_pvalue", b.jb_pvalue, other.jb_pvalue, 0.0, 1e-9),
            ] {
                assert_eq!(
                    p4(b_v),
                    p4(o_v),
                    "{} {} n={}: {stat} prints differently across normals",
                    b.measure,
                    b.param,
                    b.n
                );
                common::assert_close(o_v.unwrap(), b_v.unwrap(), abs, rel, stat);
            }
        }

        // A location shift of +5 inflates the mean without touching the sd,
        // so the standardized SE must come out strictly smaller.
        assert!(
            shifted.std_se.unwrap() < b.std_se.unwrap(),
            "{} {} n={}: shifted std se not smaller",
            b.measure,
            b.param,
            b.n
        );
    }
}

#[test]
fn criterion_4_heavy_tail_ratios() {
    let (_, ratios) = default_run();
    let spots = [
        ("var", 0.9, 1.168),
        ("es", 0.99, 2.199),
        ("srm", 100.0, 2.273),
    ];
    for (measure, param, want) in spots {
        let got = ratio(ratios, "std_t", measure, param, 250)
            .std_se_ratio
            .expect("se ratio");
        assert!(
            (got / want - 1.0).abs() <= 0.10,
            "t(5) {measure} {param} n=250: se ratio {got:.3} vs {want}"
        );
    }
    for (measure, params) in [("var", ALPHAS), ("es", ALPHAS), ("srm", ARAS)] {
        for n in NS {
            let seq: Vec<f64> = params
                .iter()
                .map(|&p| ratio(ratios, "std_t", measure, p, n).std_se_ratio.unwrap())
                .collect();
            assert!(
                seq.iter().all(|&r| r > 1.0),
                "t(5) {measure} n={n}: ratio <= 1 in {seq:?}"
            );
            assert!(
                seq[0] < seq[1] && seq[1] < seq[2],
                "t(5) {measure} n={n}: ratios not increasing {seq:?}"
            );
        }
    }
}

#[test]
fn criterion_5_skewed_ratio_bands() {
    let (_, ratios) = default_run();
    let skewed: Vec<&RatioReport> = ratios.iter().filter(|r| r.family == "2pn").collect();
    assert_eq!(skewed.len(), 36);
    for r in skewed {
        let se = r.std_se_ratio.expect("se ratio");
        assert!(
            (1.05..=1.20).contains(&se),
            "2pn {} {} n={}: se ratio {se:.4} outside [1.05, 1.20]",
            r.measure,
            r.param,
            r.n
        );
        for (name, v) in [("ci_lb", r.ci_lb_ratio), ("ci_ub", r.ci_ub_ratio)] {
            let v = v.expect("ci ratio");
            assert!(
                (0.97..=1.03).contains(&v),
                "2pn {} {} n={}: {name} ratio {v:.4} outside [0.97, 1.03]",
                r.measure,
                r.param,
                r.n
            );
        }
    }
}

#[test]
fn criterion_6_jb_pvalue_closed_loop() {
    // The fixed reference cell first: skewness 0.0779 and kurtosis 3.0633
    // over 10000 trials must print 0.0028.
    let (_, p) = jarque_bera(0.0779, 3.0633, 10_000);
    assert_eq!(format!("{p:.4}"), "0.0028");

    // Then every emitted cell: recompute exp(-JB/2) from the artifact's own
    // skewness, kurtosis, and trial count, and compare at the four decimals
    // the tables print.
    let trees = artifact_trees();
    let config: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(trees.first.join("config.json")).unwrap(),
    )
    .unwrap();
    let trials = config["trials"].as_u64().unwrap() as usize;
    let cells: Vec<serde_json::Value> = serde_json::from_str(
        &std::fs::read_to_string(trees.first.join("cells.json")).unwrap(),
    )
    .unwrap();
    let mut checked = 0;
    for c in &cells {
        let (Some(skew), Some(kurt), Some(printed)) = (
            c["skewness"].as_f64(),
            c["kurtosis"].as_f64(),
            c["jb_pvalue"].as_f64(),
        ) else {
            continue;
        };
        let (_, recomputed) = jarque_bera(skew, kurt, trials);
        assert_eq!(
            format!("{recomputed:.4}"),
            format!("{printed:.4}"),
            "cell {} {} n={} jb p-value does not close",
            c["measure"],
            c["param"],
            c["n"]
        );
        checked += 1;
    }
    assert_eq!(checked, 108, "expected every default cell to carry a jb p-value");
}

#[test]
fn criterion_7_property_battery_under_30s() {
    let start = Instant::now();
    common::affine_equivariance_1000();
    common::es_dominates_var_1000();
    common::brute_force_small_n();
    common::weights_shape_and_closed_form_sum();
    common::srm_mean_and_max_limits();
    common::round_trip_deep_tails();
    common::moments_match_simulation();
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "property battery took {elapsed:?}"
    );
}

#[test]
fn criterion_8_byte_identical_reruns_and_thread_counts() {
    let trees = artifact_trees();
    assert!(!trees.names.is_empty());
    for dir in [&trees.rerun, &trees.single] {
        let count = std::fs::read_dir(dir).unwrap().count();
        assert_eq!(count, trees.names.len(), "{} has extra or missing files", dir.display());
    }
    for name in &trees.names {
        let first = std::fs::read(trees.first.join(name)).unwrap();
        let rerun = std::fs::read(trees.rerun.join(name)).unwrap();
        let single = std::fs::read(trees.single.join(name)).unwrap();
        assert!(first == rerun, "{name} differs between identical reruns");
        assert!(first == single, "{name} differs between 8 threads and 1");
    }
}

#[test]
fn criterion_9_slow_normality_convergence_pattern() {
    let (reports, _) = default_run();
    for n in NS {
        let p = cell(reports, 0, "var", 0.99, n).jb_pvalue.unwrap();
        assert!(p < 0.001, "var 0.99 n={n}: jb p {p:.2e} should reject normality");
    }
    let p = cell(reports, 0, "var", 0.9, 2000).jb_pvalue.unwrap();
    assert!(p > 0.05, "var 0.9 n=2000: jb p {p:.4} should accept normality");
}
