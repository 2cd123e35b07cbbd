use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hankel_core::weighted_spaces::norm_weighted_linf;
use hankelops::io::read_sampled;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hankelops"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn exit(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn transform_error(input: &str, kind: &str) -> f64 {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(&[
        "transform",
        "--input",
        data(input).to_str().unwrap(),
        "--kind",
        kind,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (f, _) = read_sampled(&data(input)).unwrap();
    let (g, mu) = read_sampled(&out).unwrap();
    assert_eq!(mu.as_slice(), &[0.25]);
    g.max_abs_diff(&f).unwrap()
}

#[test]
fn shipped_samples_are_fixed_points() {
    assert!(transform_error("e_mu_0.25.csv", "z") <= 1e-8);
    assert!(transform_error("gaussian_0.25.csv", "h") <= 1e-8);
}

#[test]
fn empty_input_is_a_file_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    fs::copy(data("e_mu_0.25.json"), dir.path().join("empty.json")).unwrap();
    let o = run(&[
        "transform",
        "--input",
        empty.to_str().unwrap(),
        "--kind",
        "z",
        "--out",
        dir.path().join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 3);
}

#[test]
fn missing_input_is_a_file_error() {
    let o = run(&[
        "transform",
        "--input",
        "/nonexistent/x.csv",
        "--kind",
        "h",
        "--out",
        "/tmp/never.csv",
    ]);
    assert_eq!(exit(&o), 3);
}

#[test]
fn invalid_configurations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(
        &config,
        r#"{"mu": [0.1], "n": 2, "suite": "special", "output_dir": "x", "seed": 0}"#,
    )
    .unwrap();
    assert_eq!(
        exit(&run(&["run", "--config", config.to_str().unwrap()])),
        2
    );

    let out = dir.path().join("o");
    assert_eq!(
        exit(&run(&[
            "run",
            "--suite",
            "special",
            "--mu",
            "-0.5",
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
    assert_eq!(exit(&run(&["run", "--suite", "nonsense", "--mu", "0"])), 2);
    assert_eq!(
        exit(&run(&[
            "run",
            "--suite",
            "special",
            "--mu",
            "0",
            "0",
            "0",
            "0",
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn parameter_block_must_match_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    fs::write(&params, r#"{"alpha_re": 0.5, "mu": [0.3]}"#).unwrap();
    let o = run(&[
        "power",
        "--input",
        data("e_mu_0.25.csv").to_str().unwrap(),
        "--params",
        params.to_str().unwrap(),
        "--out",
        dir.path().join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 2);
}

#[test]
fn special_suite_passes_and_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run",
        "--suite",
        "special",
        "--mu",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert!(dir.path().join("curves/bessel_bound.csv").exists());
}

#[test]
fn tightened_tolerance_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run",
        "--suite",
        "special",
        "--mu",
        "0",
        "--tol",
        "special.gaussian_pair=1e-300",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL special.gaussian_pair"));
}

#[test]
fn liouville_in_two_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run",
        "--suite",
        "liouville",
        "--mu",
        "0.3",
        "0.7",
        "--alpha",
        "0.5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir
        .path()
        .join("curves/liouville_residuals_alpha0.5.csv")
        .exists());
}

#[test]
fn balakrishnan_check_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    fs::write(
        &params,
        r#"{"alpha_re": 0.5, "alpha_im": 0.5, "mu": [0.25]}"#,
    )
    .unwrap();
    let o = run(&[
        "balakrishnan-check",
        "--input",
        data("e_mu_0.25.csv").to_str().unwrap(),
        "--params",
        params.to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["m"], 1);
}

#[test]
fn pairing_and_resolvent_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    fs::write(&params, r#"{"alpha_re": 0.5, "mu": [0.25]}"#).unwrap();
    let o = run(&[
        "pairing",
        "--input",
        data("gaussian_0.25.csv").to_str().unwrap(),
        "--params",
        params.to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["scale"].as_f64().unwrap() > 0.0);

    let out = dir.path().join("r.csv");
    let o = run(&[
        "resolvent",
        "--input",
        data("e_mu_0.25.csv").to_str().unwrap(),
        "--lambda",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (g, mu) = read_sampled(&out).unwrap();
    let (f, _) = read_sampled(&data("e_mu_0.25.csv")).unwrap();
    let lhs = norm_weighted_linf(&g, &mu).unwrap();
    let rhs = norm_weighted_linf(&f, &mu).unwrap();
    assert!(lhs > 0.0 && lhs <= rhs * (1.0 + 1e-6), "{lhs} > {rhs}");
}
