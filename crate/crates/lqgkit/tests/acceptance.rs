//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured quantities (run with `--nocapture` to see them).

mod common;

use std::process::Command;

use common::{care_hamiltonian_oracle, max_real_eig, TestRng};
use lqgkit::airframe::euler_discretize;
use lqgkit::kalman::{kf_gain, kf_init, kf_predict, kf_step, kf_update, FilterConfig, FilterState, NoiseSpec};
use lqgkit::linalg::{care_residual, eigenvalues, solve_care, solve_linear, Matrix};
use lqgkit::lqr::lqr_gain;
use lqgkit::sim::{
    compute_metrics, run_scenario, run_scenario_with, sample_noise, FeedbackSource, Scenario,
    TraceRow, WeightSpec,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lqgkit"))
}

/// Criterion 1: the shipped flight core's spectrum equals the printed
/// factors' roots within 1e-4, checked through the `roots` subcommand.
#[test]
fn criterion_01_flight_core_spectrum() {
    let out = bin()
        .args(["roots", "--scenario", "longitudinal-demo"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let core = text
        .split("dynamic core")
        .nth(1)
        .expect("core section present");
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for line in core.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('+').or_else(|| line.strip_prefix('-')) {
            let sign = if line.starts_with('-') { -1.0 } else { 1.0 };
            let mut parts = rest.split_whitespace();
            let re: f64 = sign * parts.next().unwrap().parse::<f64>().unwrap();
            let im = match (parts.next(), parts.next()) {
                (Some(s), Some(v)) => {
                    let mag: f64 = v.trim_end_matches('i').parse().unwrap();
                    if s == "-" {
                        -mag
                    } else {
                        mag
                    }
                }
                _ => 0.0,
            };
            roots.push((re, im));
        }
    }
    assert_eq!(roots.len(), 4, "core prints four roots: {text}");
    for (re, im) in [(-7.5215, 4.6367), (-7.5215, -4.6367), (-0.2935, 1.0155), (-0.2935, -1.0155)] {
        let hit = roots
            .iter()
            .any(|(r, i)| (r - re).abs() <= 1e-4 && (i - im).abs() <= 1e-4);
        assert!(hit, "missing root {re}{im:+}i among {roots:?}");
    }
    assert!(core.contains("verdict: stable"), "core verdict must be stable");
    println!("ACCEPTANCE 1 PASS: flight-core spectrum matches the factored polynomial within 1e-4");
}

/// Criterion 2: Riccati residual and closed-loop stability over 50 random
/// stabilizable systems, plus the double-integrator gain against the
/// Hamiltonian-eigendecomposition oracle.
#[test]
fn criterion_02_riccati_correctness() {
    let mut rng = TestRng(0x5eed);
    let mut checked = 0;
    while checked < 50 {
        let n = 2 + (checked % 5); // sizes 2..=6
        let m = 1 + (checked % 2);
        // random stabilizable systems with separated spectra: A = S D S^-1
        // with jittered well-spaced real eigenvalues (many unstable) and a
        // random well-conditioned similarity. Defective unstable clusters
        // under a single input would drive ||P|| beyond what any f64
        // residual evaluation can certify at this tolerance.
        let gap = 5.0 / n as f64;
        let d = Matrix::from_diag(
            &(0..n)
                .map(|i| -2.5 + gap * (i as f64 + 0.5 + 0.3 * rng.next_f64()))
                .collect::<Vec<_>>(),
        );
        let mut s = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                s.set(i, j, s.get(i, j) + 0.25 * rng.next_f64());
            }
        }
        let sd = s.mat_mul(&d).unwrap();
        let a = solve_linear(&s.transpose(), &sd.transpose()).unwrap().transpose();
        let b = rng.matrix(n, m);
        // random pairs are controllable almost surely; verify to be safe
        let model = lqgkit::airframe::LinearModel::continuous(
            a.clone(),
            b.clone(),
            Matrix::identity(n),
            Matrix::identity(n),
        )
        .unwrap();
        if lqgkit::airframe::controllability_rank(&model) < n {
            continue;
        }
        let q = rng.spd(n);
        let r = rng.spd(m);
        let p = solve_care(&a, &b, &q, &r).unwrap();
        let res = care_residual(&a, &b, &q, &r, &p).unwrap();
        assert!(
            res <= 1e-8 * (1.0 + q.frobenius_norm()),
            "system {checked}: residual {res}"
        );
        let k = solve_linear(&r, &b.transpose().mat_mul(&p).unwrap()).unwrap();
        let closed = a.sub(&b.mat_mul(&k).unwrap()).unwrap();
        assert!(max_real_eig(&closed) < 0.0, "system {checked} not Hurwitz");
        checked += 1;
    }

    // double integrator against the oracle
    let a = Matrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let b = Matrix::from_rows(&[&[0.0], &[1.0]]);
    let q = Matrix::identity(2);
    let r = Matrix::identity(1);
    let p_oracle = care_hamiltonian_oracle(&a, &b, &q, &r);
    let k_oracle = b.transpose().mat_mul(&p_oracle).unwrap();
    let s3 = 3.0f64.sqrt();
    assert!((k_oracle.get(0, 0) - 1.0).abs() <= 1e-6, "oracle k0 {}", k_oracle.get(0, 0));
    assert!((k_oracle.get(0, 1) - s3).abs() <= 1e-6, "oracle k1 {}", k_oracle.get(0, 1));
    let model = lqgkit::airframe::LinearModel::continuous(a, b, Matrix::identity(2), Matrix::identity(2)).unwrap();
    let design = lqr_gain(&model, &q, &r).unwrap();
    assert!((design.k_gain.get(0, 0) - 1.0).abs() <= 1e-6);
    assert!((design.k_gain.get(0, 1) - s3).abs() <= 1e-6);
    let dev = design.k_gain.sub(&k_oracle).unwrap().max_abs();
    assert!(dev <= 1e-6, "implementation vs oracle gain deviation {dev}");
    println!("ACCEPTANCE 2 PASS: 50 random Riccati solves within tolerance; double-integrator gain matches the Hamiltonian oracle");
}

/// Criterion 3: both printed forms of the filter gain agree within 1e-9
/// relative on 100 random SPD instances.
#[test]
fn criterion_03_gain_identity() {
    let mut rng = TestRng(0xaffe);
    for instance in 0..100 {
        let n = 2 + (instance % 4);
        let q_dim = 1 + (instance % n.min(3));
        let p_minus = rng.spd(n);
        let h = rng.matrix(q_dim, n);
        let r_meas = rng.spd(q_dim);
        let model = lqgkit::airframe::LinearModel {
            a: Matrix::identity(n),
            b: Matrix::zeros(n, 1),
            g_noise: Matrix::identity(n),
            h_meas: h.clone(),
            is_discrete: true,
            dt: Some(1.0),
        };
        let cfg = FilterConfig::new(
            model,
            NoiseSpec::new(Matrix::identity(n), r_meas.clone(), Matrix::zeros(1, 1)).unwrap(),
            Matrix::zeros(1, n),
            vec![0.0; n],
        )
        .unwrap();
        let prior = FilterState {
            x_est: vec![0.0; n],
            p_cov: p_minus,
            k_step: 0,
            last_innovation: None,
            last_gain: None,
            is_prior: true,
        };
        let k = kf_gain(&prior, &cfg).unwrap();
        let z = vec![0.0; q_dim];
        let post = kf_update(&prior, &z, &cfg).unwrap();
        // P+ H^T R^-1, computed without forming the inverse
        let alt = solve_linear(&r_meas, &h.mat_mul(&post.p_cov).unwrap())
            .unwrap()
            .transpose();
        let dev = alt.sub(&k).unwrap().max_abs();
        assert!(
            dev <= 1e-9 * (1.0 + k.max_abs()),
            "instance {instance}: gain forms deviate by {dev}"
        );
    }
    println!("ACCEPTANCE 3 PASS: both gain forms agree within 1e-9 relative on 100 random SPD instances");
}

/// Criterion 4: the zero-process-noise scalar chain has P+(k) = 1/(k+1).
#[test]
fn criterion_04_scalar_closed_form() {
    let model = lqgkit::airframe::LinearModel {
        a: Matrix::from_rows(&[&[1.0]]),
        b: Matrix::from_rows(&[&[0.0]]),
        g_noise: Matrix::identity(1),
        h_meas: Matrix::identity(1),
        is_discrete: true,
        dt: Some(1.0),
    };
    let cfg = FilterConfig::new(
        model,
        NoiseSpec::from_diagonals(&[0.0], &[1.0], &[0.0]).unwrap(),
        Matrix::zeros(1, 1),
        vec![0.0],
    )
    .unwrap();
    let mut s = kf_init(&cfg, &[0.0], &Matrix::identity(1)).unwrap();
    for k in 1..=50 {
        s = kf_step(&s, &[0.0], &cfg).unwrap();
        let expected = 1.0 / (k as f64 + 1.0);
        let got = s.p_cov.get(0, 0);
        assert!(
            (got - expected).abs() <= 1e-12,
            "step {k}: P+ = {got}, closed form {expected}"
        );
    }
    println!("ACCEPTANCE 4 PASS: scalar chain reproduces P+(k) = 1/(k+1) for k = 1..50 within 1e-12");
}

/// Criterion 5: covariance hygiene across a full 540-step default run at
/// dt 0.5: symmetry within 1e-10, PSD within -1e-10, and the update never
/// inflates the covariance in the Loewner order.
#[test]
fn criterion_05_covariance_hygiene() {
    let scenario = Scenario::preset("planar-goal").unwrap();
    assert_eq!(scenario.dt, 0.5);
    assert_eq!(scenario.num_steps(), 540);
    let model_c = scenario.build_model().unwrap();
    let (q_w, r_w) = scenario.weight_matrices(&model_c).unwrap();
    let design = lqr_gain(&model_c, &q_w, &r_w).unwrap();
    let model_d = euler_discretize(&model_c, scenario.dt).unwrap();
    let true_noise = scenario.true_noise.to_spec(&model_d).unwrap();
    let cfg = FilterConfig::new(
        model_d.clone(),
        scenario.assumed_noise.to_spec(&model_d).unwrap(),
        design.k_gain.clone(),
        scenario.x_desired.clone(),
    )
    .unwrap();
    let mut filter = kf_init(&cfg, &scenario.est0, &Matrix::identity(4)).unwrap();
    let mut truth = scenario.x0.clone();
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);

    let min_eig = |m: &Matrix| -> f64 {
        eigenvalues(m)
            .unwrap()
            .iter()
            .fold(f64::INFINITY, |acc, e| acc.min(e.re))
    };

    for step in 0..540 {
        let err: Vec<f64> = scenario
            .x_desired
            .iter()
            .zip(&filter.x_est)
            .map(|(d, x)| d - x)
            .collect();
        let u = cfg.k_lqr.mul_vec(&err).unwrap();
        let (w, v) = sample_noise(&true_noise, &mut rng);
        let ax = model_d.a.mul_vec(&truth).unwrap();
        let bu = model_d.b.mul_vec(&u).unwrap();
        let gw = model_d.g_noise.mul_vec(&w).unwrap();
        truth = ax.iter().zip(&bu).zip(&gw).map(|((a, b), g)| a + b + g).collect();
        let z: Vec<f64> = model_d
            .h_meas
            .mul_vec(&truth)
            .unwrap()
            .iter()
            .zip(&v)
            .map(|(h, vi)| h + vi)
            .collect();

        let prior = kf_predict(&filter, &cfg).unwrap();
        let post = kf_update(&prior, &z, &cfg).unwrap();

        assert!(prior.p_cov.is_symmetric(1e-10), "step {step}: P- asymmetric");
        assert!(post.p_cov.is_symmetric(1e-10), "step {step}: P+ asymmetric");
        assert!(min_eig(&prior.p_cov) >= -1e-10, "step {step}: P- not PSD");
        assert!(min_eig(&post.p_cov) >= -1e-10, "step {step}: P+ not PSD");
        let contraction = prior.p_cov.sub(&post.p_cov).unwrap();
        assert!(
            min_eig(&contraction) >= -1e-10,
            "step {step}: update inflated the covariance"
        );
        filter = post;
    }
    println!("ACCEPTANCE 5 PASS: covariance symmetric, PSD, and contracting across all 540 steps");
}

/// Criterion 6: estimate feedback beats raw-measurement feedback on at
/// least 18 of 20 seeds of the planar preset.
#[test]
fn criterion_06_filter_benefit() {
    let scenario = Scenario::preset("planar-goal").unwrap();
    let mut wins = 0;
    for seed in 0..20 {
        let filtered = run_scenario(&scenario, seed).unwrap().metrics.mse;
        let raw = run_scenario_with(&scenario, seed, FeedbackSource::Measurement)
            .unwrap()
            .metrics
            .mse;
        if filtered < raw {
            wins += 1;
        }
    }
    assert!(wins >= 18, "filter won on only {wins}/20 seeds");
    println!("ACCEPTANCE 6 PASS: filtered MSE beat raw-measurement MSE on {wins}/20 seeds");
}

/// Criterion 7: firefly sanity on the sphere function.
#[test]
fn criterion_07_firefly_sanity() {
    use lqgkit::firefly::{optimize, FireflyParams, SearchSpace};
    let space = SearchSpace::new(vec![-5.0, -5.0], vec![5.0, 5.0]).unwrap();
    let mut hits = 0;
    for seed in 1..=10 {
        let params = FireflyParams {
            population: 25,
            iterations: 200,
            seed,
            ..Default::default()
        };
        let r = optimize(|x| x.iter().map(|v| v * v).sum(), &space, &params).unwrap();
        for w in r.history.windows(2) {
            assert!(w[1] <= w[0], "history increased on seed {seed}");
        }
        if r.best_cost <= 1e-2 {
            hits += 1;
        }
    }
    assert!(hits >= 9, "sphere solved on only {hits}/10 seeds");
    println!("ACCEPTANCE 7 PASS: sphere reached 1e-2 on {hits}/10 seeds with non-increasing history");
}

/// Criterion 8: firefly-tuned assumed noise beats a filter whose assumed R
/// is scaled 100x, on the scenario's own seed list.
#[test]
fn criterion_08_tuning_benefit() {
    use lqgkit::firefly::{selector_diagonals, tune_pipeline, FireflyParams, SearchSpace, TuneSelector};
    let mut scenario = Scenario::preset("planar-goal").unwrap();
    scenario.duration = 135.0; // budgeted horizon; criterion fixes iterations and population

    let selectors = [TuneSelector::KfNoiseDiagonals];
    let center: Vec<f64> = selector_diagonals(&scenario, &selectors)
        .unwrap()
        .iter()
        .map(|v| v.log10())
        .collect();
    let space = SearchSpace::new(
        center.iter().map(|c| c - 2.0).collect(),
        center.iter().map(|c| c + 2.0).collect(),
    )
    .unwrap();
    let params = FireflyParams {
        population: 15,
        iterations: 50,
        seed: 1,
        ..Default::default()
    };
    let tuned = tune_pipeline(&scenario, &selectors, &space, &params).unwrap();

    let mut mismatched = scenario.clone();
    mismatched.assumed_noise.r_meas =
        WeightSpec::Diagonal(vec![250000.0, 400.0, 250000.0, 400.0]);
    let mean_mse = |sc: &Scenario| -> f64 {
        sc.seeds
            .iter()
            .map(|&seed| run_scenario(sc, seed).unwrap().metrics.mse)
            .sum::<f64>()
            / sc.seeds.len() as f64
    };
    let tuned_mse = mean_mse(&tuned.tuned_scenario);
    let mismatched_mse = mean_mse(&mismatched);
    assert!(
        tuned_mse <= mismatched_mse,
        "tuned {tuned_mse} vs mismatched {mismatched_mse}"
    );
    println!(
        "ACCEPTANCE 8 PASS: tuned mean MSE {tuned_mse:.3} <= 100x-mismatched mean MSE {mismatched_mse:.3}"
    );
}

/// Criterion 9: repeated `simulate` with identical scenario and seed writes
/// byte-identical trace.csv, metrics.json, and plot.csv.
#[test]
fn criterion_09_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args([
                "simulate",
                "--scenario",
                "planar-goal",
                "--seed",
                "7",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary runs");
        assert!(status.success());
    }
    for file in ["trace.csv", "metrics.json", "plot.csv"] {
        let a = std::fs::read(out_a.join(file)).unwrap();
        let b = std::fs::read(out_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
        assert!(!a.is_empty());
    }
    println!("ACCEPTANCE 9 PASS: identical runs produce byte-identical trace.csv, metrics.json, plot.csv");
}

/// Criterion 10: the reference evaluation figures are recorded as
/// non-reproducible in the docs, and the metric formulas are pinned by the
/// closed-form examples instead.
#[test]
fn criterion_10_metric_formulas_and_reference_figures() {
    let scenario = Scenario::preset("planar-goal").unwrap();
    // constant per-channel error of 0.8 gives MSE 0.64 exactly
    let rows: Vec<TraceRow> = (0..25)
        .map(|k| {
            let truth = vec![8000.0, 0.0, 8000.0, 0.0];
            let est: Vec<f64> = truth.iter().map(|v| v + 0.8).collect();
            TraceRow {
                t: (k + 1) as f64 * 0.5,
                measurement: truth.clone(),
                est_prior: est.clone(),
                est_post: est,
                control: vec![0.0, 0.0],
                innovation: vec![0.0; 4],
                truth,
            }
        })
        .collect();
    let m = compute_metrics(&rows, &scenario);
    assert!((m.mse - 0.64).abs() <= 1e-12, "constant-error MSE {}", m.mse);

    // peak 1 with MSE 0.01 gives PSNR 20 dB exactly
    let rows: Vec<TraceRow> = (0..4)
        .map(|k| {
            let truth = vec![1.0, 0.0, 0.0, 0.0];
            let est = vec![1.2, 0.0, 0.0, 0.0];
            TraceRow {
                t: (k + 1) as f64 * 0.5,
                measurement: truth.clone(),
                est_prior: est.clone(),
                est_post: est,
                control: vec![0.0, 0.0],
                innovation: vec![0.0; 4],
                truth,
            }
        })
        .collect();
    let m = compute_metrics(&rows, &scenario);
    assert!((m.psnr_db - 20.0).abs() <= 1e-9, "PSNR {}", m.psnr_db);

    // the README records the reference figures as reference output only
    let readme_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md");
    let readme = std::fs::read_to_string(readme_path).expect("workspace README exists");
    for figure in ["0.6400", "9.9310", "56.0618", "96.00", "80.08", "80.07"] {
        assert!(
            readme.contains(figure),
            "README must record reference figure {figure}"
        );
    }
    assert!(
        readme.to_lowercase().contains("not reproducible"),
        "README must state the reference figures are not reproducible"
    );
    println!("ACCEPTANCE 10 PASS: metric formulas pinned by closed-form cases; reference figures recorded as docs-only");
}
