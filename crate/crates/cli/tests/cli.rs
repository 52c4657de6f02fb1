mod common;

use common::{golden, hematocrit, histreg, path_str, stderr, stdout};
use histreg::{mallows_sq, wasserstein, Histogram, Quantile};
use histreg_cli::dataset::{quantile_of, DatasetFile};
use histreg_cli::report::{FitReport, PredictionReport, SimulationReport};
use sha2::{Digest, Sha256};
use std::fs;
use tempfile::TempDir;

const HEMATOCRIT_SHA256: &str = "7e98bc6a8d2228894d3eb3d6ab6a229a34132bafa6bdd35d1a1bf5b7d0a1959f";

fn fit_to(dir: &TempDir, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let out = dir.path().join(name);
    let data = hematocrit();
    let mut args = vec![
        "fit",
        "--data",
        path_str(&data),
        "--response",
        "hematocrit",
        "--predictors",
        "hemoglobin",
        "--out",
        path_str(&out),
    ];
    args.extend_from_slice(extra);
    let o = histreg(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

fn quantile(rec: &histreg_cli::dataset::HistogramRecord) -> Quantile {
    rec.to_histogram().unwrap().to_quantile().unwrap()
}

#[test]
fn dataset_checksum_is_pinned() {
    let bytes = fs::read(hematocrit()).unwrap();
    assert_eq!(hex::encode(Sha256::digest(&bytes)), HEMATOCRIT_SHA256);
}

#[test]
fn fit_report_round_trips_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = fs::read_to_string(fit_to(&dir, "a.json", &[])).unwrap();
    let b = fs::read_to_string(fit_to(&dir, "b.json", &[])).unwrap();
    assert_eq!(a, b);
    let report: FitReport = serde_json::from_str(&a).unwrap();
    assert_eq!(histreg_cli::report::to_json(&report), a);
    assert_eq!(report.units.len(), 10);
    assert!((report.coefficients.alphas[0] - 3.5598).abs() < 5e-3);
    assert!(report.rmse.m > 0.0 && report.kkt_residual < 1e-9);
}

#[test]
fn fit_prints_summary_or_report() {
    let data = hematocrit();
    let args = ["fit", "--data", path_str(&data), "--response", "hematocrit", "--predictors", "hemoglobin"];
    let o = histreg(&args);
    assert!(o.status.success());
    let report: FitReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.predictors, vec!["hemoglobin"]);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path_str(&out)]);
    let o = histreg(&with_out);
    let text = stdout(&o);
    assert!(text.contains("alpha 3.5598"), "{text}");
    assert!(text.contains("omega 0.9631"), "{text}");
}

#[test]
fn response_equal_to_predictor_gives_omega_one() {
    let dir = TempDir::new().unwrap();
    let mut ds = DatasetFile::read(&hematocrit()).unwrap();
    ds.variables.push("copy".into());
    for u in &mut ds.units {
        let v = u.values["hemoglobin"].clone();
        u.values.insert("copy".into(), v);
    }
    let path = dir.path().join("copy.json");
    fs::write(&path, ds.to_json()).unwrap();
    let o = histreg(&["fit", "--data", path_str(&path), "--response", "copy", "--predictors", "hemoglobin"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: FitReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report.omega - 1.0).abs() < 1e-9, "omega {}", report.omega);
    assert!((report.coefficients.alphas[0] - 1.0).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    let data = hematocrit();
    let o = histreg(&["fit", "--data", path_str(&data), "--response", "hematocrit", "--predictors", "platelets"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("platelets"));

    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\n  \"schema\": 1,\n  \"variables\": [\n").unwrap();
    let o = histreg(&["validate", "--data", path_str(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.json:4:"), "{}", stderr(&o));

    // Squared bounds overflow, so the problem cannot be assembled.
    let huge = dir.path().join("huge.json");
    fs::write(
        &huge,
        r#"{"schema": 1, "variables": ["y", "x"], "units": [
            {"label": "a", "values": {"y": {"bins": [[1e300, 1e301]], "weights": [1]}, "x": {"bins": [[0, 1]], "weights": [1]}}},
            {"label": "b", "values": {"y": {"bins": [[2e300, 3e301]], "weights": [1]}, "x": {"bins": [[1e300, 3e301]], "weights": [1]}}},
            {"label": "c", "values": {"y": {"bins": [[0, 1]], "weights": [1]}, "x": {"bins": [[5, 6]], "weights": [1]}}}
        ]}"#,
    )
    .unwrap();
    let o = histreg(&["fit", "--data", path_str(&huge), "--response", "y", "--predictors", "x"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let o = histreg(&["validate", "--data", path_str(&data)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn predict_on_training_data_matches_reference_rows() {
    let dir = TempDir::new().unwrap();
    let model = fit_to(&dir, "m.json", &[]);
    let data = hematocrit();
    let o = histreg(&["predict", "--model", path_str(&model), "--data", path_str(&data)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: PredictionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.units.len(), 10);
    for (j, u) in report.units.iter().enumerate() {
        let bins = &u.predicted.bins;
        assert_eq!(bins.len(), 6);
        for (i, [lo, hi]) in bins.iter().enumerate() {
            let [glo, ghi] = golden::DSD[j][i];
            assert!((lo.unwrap() - glo).abs() <= 0.01, "unit {} bin {i}", u.label);
            assert!((hi.unwrap() - ghi).abs() <= 0.01, "unit {} bin {i}", u.label);
        }
    }
    let fitted: FitReport = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    let agg = report.rmse.unwrap();
    assert!((agg.m - fitted.rmse.m).abs() < 1e-12);
}

#[test]
fn identity_model_echoes_input() {
    let dir = TempDir::new().unwrap();
    let model = fit_to(&dir, "m.json", &[]);
    let mut report: FitReport = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    report.coefficients.alphas = vec![1.0];
    report.coefficients.betas = vec![0.0];
    report.coefficients.gamma = 0.0;
    fs::write(&model, histreg_cli::report::to_json(&report)).unwrap();
    let data = hematocrit();
    let o = histreg(&["predict", "--model", path_str(&model), "--data", path_str(&data)]);
    let pred: PredictionReport = serde_json::from_str(&stdout(&o)).unwrap();
    let ds = DatasetFile::read(&data).unwrap();
    for (u, p) in ds.units.iter().zip(&pred.units) {
        let x = quantile_of(u, "hemoglobin", None).unwrap();
        let y = quantile(&p.predicted);
        assert!(mallows_sq(&x, &y) < 1e-20);
        for t in [0.05, 0.35, 0.5, 0.95] {
            assert!((x.eval(t).unwrap() - y.eval(t).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn held_out_unit_prediction() {
    let dir = TempDir::new().unwrap();
    let model = fit_to(&dir, "loo.json", &["--exclude-units", "10"]);
    let fitted: FitReport = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(fitted.units.len(), 9);
    let data = hematocrit();
    let o = histreg(&["predict", "--model", path_str(&model), "--data", path_str(&data), "--units", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: PredictionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.units.len(), 1);
    let rmse = report.units[0].rmse.expect("response is known");

    // Direct computation from the fitted coefficients.
    let ds = DatasetFile::read(&data).unwrap();
    let unit = ds.unit("10").unwrap();
    let coef = fitted.coefficients.to_coefficients().unwrap();
    let x = quantile_of(unit, "hemoglobin", None).unwrap();
    let y = quantile_of(unit, "hematocrit", None).unwrap();
    let direct = coef.predict_on(&fitted.partition, &[x]).unwrap();
    assert!((rmse.m - mallows_sq(&y, &direct).sqrt()).abs() < 1e-12);
    let (l, u) = histreg::metrics::unit_bound_errors(&y, &direct);
    assert!((rmse.l - l).abs() < 1e-12 && (rmse.u - u).abs() < 1e-12);
}

#[test]
fn distance_command() {
    let data = hematocrit();
    let run = |a: &str, b: &str, metric: &str| {
        histreg(&["distance", "--data", path_str(&data), "--var", "hematocrit", "--unit-a", a, "--unit-b", b, "--metric", metric])
    };
    let o = run("3", "3", "mallows");
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");

    let ds = DatasetFile::read(&data).unwrap();
    let a = quantile_of(ds.unit("1").unwrap(), "hematocrit", None).unwrap();
    let b = quantile_of(ds.unit("2").unwrap(), "hematocrit", None).unwrap();
    let parse = |o: std::process::Output| stdout(&o).trim().parse::<f64>().unwrap();
    let m = parse(run("1", "2", "mallows"));
    assert!((m - mallows_sq(&a, &b).sqrt()).abs() <= 1e-11 * m);
    let w = parse(run("1", "2", "wasserstein"));
    assert!((w - wasserstein(&a, &b)).abs() <= 1e-11 * w);
    assert!(w <= m);

    let o = run("1", "nope", "mallows");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope"));
}

#[test]
fn validate_lists_violations() {
    let data = hematocrit();
    let o = histreg(&["validate", "--data", path_str(&data)]);
    assert_eq!(stdout(&o), "0 issues\n");

    let dir = TempDir::new().unwrap();
    let mut ds = DatasetFile::read(&data).unwrap();
    ds.units[1].values.get_mut("hematocrit").unwrap().weights = vec![0.3, 0.6];
    ds.units[4].values.get_mut("hemoglobin").unwrap().bins[0] = [Some(14.0), Some(13.0)];
    let bad = dir.path().join("bad.json");
    fs::write(&bad, ds.to_json()).unwrap();
    let o = histreg(&["validate", "--data", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("unit \"2\", variable \"hematocrit\""), "{text}");
    assert!(text.contains("unit \"5\", variable \"hemoglobin\""), "{text}");
    assert!(text.ends_with("2 issues\n"), "{text}");
}

#[test]
fn simulate_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"true_params": {"alphas": [2.0], "betas": [1.0], "gamma": -1.0},
            "distributions": [{"family": "uniform"}],
            "linearity": "high", "m": 20, "replications": 1, "base_seed": 5}"#,
    )
    .unwrap();
    let outs: Vec<String> = ["a.json", "b.json"]
        .iter()
        .map(|name| {
            let out = dir.path().join(name);
            let o = histreg(&["simulate", "--config", path_str(&cfg), "--out", path_str(&out)]);
            assert!(o.status.success(), "{}", stderr(&o));
            fs::read_to_string(out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let report: SimulationReport = serde_json::from_str(&outs[0]).unwrap();
    assert_eq!(report.config.base_seed, 5);
    assert_eq!(report.summary.failures, 0);

    fs::write(&cfg, r#"{"true_params": {"alphas": [-1.0], "betas": [1.0], "gamma": 0.0}, "distributions": [{"family": "uniform"}], "linearity": "high", "m": 20}"#).unwrap();
    let o = histreg(&["simulate", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_cap_must_be_positive() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"true_params": {"alphas": [1.0], "betas": [0.0], "gamma": 0.0}, "distributions": [{"family": "normal"}], "linearity": "low", "m": 5, "replications": 2}"#).unwrap();
    let run = |threads: &str| {
        std::process::Command::new(env!("CARGO_BIN_EXE_histreg"))
            .args(["simulate", "--config", path_str(&cfg)])
            .env(histreg_cli::THREADS_ENV, threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("zero").status.code(), Some(2));
    let one = run("1");
    let two = run("2");
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn import_csv_builds_equal_weight_dataset() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("k.csv");
    fs::write(&csv, "unit,variable,q0,q1,q2,q3\nA,x,0,1,2,4\nA,y,1,2,3,3\nB,x,1,1.5,2,2.5\nB,y,0,2,4,6\n").unwrap();
    let out = dir.path().join("k.json");
    let o = histreg(&["import-csv", "--csv", path_str(&csv), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ds = DatasetFile::read(&out).unwrap();
    assert!(ds.issues().is_empty());
    let q = quantile(&ds.unit("A").unwrap().values["x"]);
    let expected = Histogram::new(vec![(0.0, 1.0), (1.0, 2.0), (2.0, 4.0)], vec![1.0 / 3.0; 3])
        .unwrap()
        .to_quantile()
        .unwrap();
    assert!(mallows_sq(&q, &expected) < 1e-24);
    let o = histreg(&["validate", "--data", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
}
