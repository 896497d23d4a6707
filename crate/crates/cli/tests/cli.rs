//! End-to-end runs of the `gradlab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gradlab::experiment::RunConfig;
use gradlab::mesh::Resolution;
use gradlab::model::{thresholds, DomainSpec, GradientCoefSpec, NonlinearitySpec, ProblemSpec};
use serde_json::Value;

fn gradlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_config(dir: &Path, cfg: &RunConfig) -> String {
    let path = dir.join("config.json");
    fs::write(&path, cfg.to_json()).unwrap();
    path.display().to_string()
}

fn scaling_config(n: usize, p: f64, sigma: f64) -> RunConfig {
    let mut cfg = RunConfig::new(ProblemSpec::new(
        DomainSpec::ball(n, 1.0),
        1.0,
        NonlinearitySpec::power(p),
        GradientCoefSpec::constant_over_s(sigma),
    ));
    cfg.resolution = Resolution::radial(400);
    cfg
}

#[test]
fn exit_codes_follow_the_outcome() {
    let tmp = tempfile::tempdir().unwrap();
    let out = |name: &str| tmp.path().join(name).display().to_string();

    let ok = gradlab(&["solve", "--preset", "strong-small-mu", "--out", &out("ok")]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(tmp.path().join("ok/solution.txt").exists());

    let nc = gradlab(&["solve", "--preset", "strong-singular", "--out", &out("nc")]);
    assert_eq!(code(&nc), 2);
    let m = read_json(&tmp.path().join("nc/manifest.json"));
    assert_eq!(m["status"], "no-convergence");

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"problem\": ").unwrap();
    let o = gradlab(&[
        "solve",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        &out("bad"),
    ]);
    assert_eq!(code(&o), 3);
    assert!(!tmp.path().join("bad").exists());

    let unknown = tmp.path().join("unknown.json");
    fs::write(&unknown, "{\"problem\": {}, \"colour\": 1}").unwrap();
    let o = gradlab(&[
        "solve",
        "--config",
        unknown.to_str().unwrap(),
        "--out",
        &out("u"),
    ]);
    assert_eq!(code(&o), 3);
    assert!(!tmp.path().join("u").exists());

    let missing = tmp.path().join("missing.json");
    let o = gradlab(&[
        "solve",
        "--config",
        missing.to_str().unwrap(),
        "--out",
        &out("m"),
    ]);
    assert_eq!(code(&o), 4);

    let o = gradlab(&["solve", "--preset", "no-such-preset", "--out", &out("p")]);
    assert_eq!(code(&o), 3);
    let o = gradlab(&[
        "solve",
        "--preset",
        "strong-small-mu",
        "--set",
        "problem.lambda=-1",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&gradlab(&["no-such-command"])), 3);
}

#[test]
fn psi_check_flips_across_sigma1() {
    let tmp = tempfile::tempdir().unwrap();
    for n in [3usize, 4, 5] {
        let p = 2.0;
        let s1 = thresholds(n, p).unwrap().sigma1;
        for (sigma, expected) in [(s1 - 1e-3, "pass"), (s1 + 1e-3, "fail")] {
            let dir = tmp.path().join(format!("psi-{n}-{expected}"));
            fs::create_dir_all(&dir).unwrap();
            let cfg = write_config(&dir, &scaling_config(n, p, sigma));
            let out = dir.join("out");
            let o = gradlab(&[
                "check",
                "psi-decreasing",
                "--config",
                &cfg,
                "--out",
                out.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0);
            let v = read_json(&out.join("verdict.json"));
            assert_eq!(v["outcome"], expected, "N={n} σ={sigma}: {v}");
        }
    }
}

#[test]
fn eigen_on_the_unit_interval_extrapolates_to_pi_squared() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("eigen");
    let o = gradlab(&[
        "eigen",
        "--preset",
        "strong-small-mu",
        "--interval",
        "0,1",
        "--richardson",
        "--set",
        "resolution.intervals=1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = read_json(&out.join("eigen.json"));
    let pi2 = std::f64::consts::PI.powi(2);
    let ext = v["extrapolated"].as_f64().unwrap();
    assert!((ext - pi2).abs() < 1e-5, "{v}");
    assert!(out.join("eigenvector.txt").exists());
}

#[test]
fn manufactured_pohozaev_reports_its_terms() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("poh");
    let o = gradlab(&[
        "check",
        "pohozaev",
        "--preset",
        "strong-small-mu",
        "--set",
        "check.manufactured=true",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = read_json(&out.join("verdict.json"));
    assert_eq!(v["field"], "manufactured");
    let t = &v["terms"];
    let d = v["defect"].as_f64().unwrap();
    assert!(d.is_finite());
    assert_eq!(t["defect"].as_f64().unwrap(), d);
}

#[test]
fn empty_grid_gives_a_header_only_table() {
    let tmp = tempfile::tempdir().unwrap();
    for (cmd, name) in [("sweep-lambda", "l"), ("sweep-t", "t")] {
        let out = tmp.path().join(name);
        let o = gradlab(&[
            cmd,
            "--preset",
            "large-lambda-nonnegative-mu",
            "--grid",
            "",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1, "{csv}");
        assert!(csv.starts_with("param,"));
    }
}

#[test]
fn exact_scaling_sweep_has_a_flat_scaled_column() {
    let tmp = tempfile::tempdir().unwrap();
    let p = 3.0;
    let sigma = 0.5 * thresholds(3, p).unwrap().sigma1;
    let cfg = write_config(tmp.path(), &scaling_config(3, p, sigma));
    let out = tmp.path().join("sweep");
    let o = gradlab(&[
        "sweep-lambda",
        "--config",
        &cfg,
        "--grid",
        "0.1,1,10,100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let scaled: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(scaled.len(), 4);
    let ref_value = scaled[0];
    for s in &scaled {
        assert!((s - ref_value).abs() <= 1e-8 * ref_value, "{csv}");
    }
}

#[test]
fn worker_count_does_not_change_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |workers: &str, name: &str| {
        let out = tmp.path().join(name);
        let o = gradlab(&[
            "--workers",
            workers,
            "probe-nonexist",
            "--preset",
            "source-large-mu-outside",
            "--set",
            "resolution.intervals=100",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        (
            fs::read(out.join("probe.csv")).unwrap(),
            fs::read(out.join("probe.json")).unwrap(),
        )
    };
    assert_eq!(run("1", "one"), run("4", "four"));
}

#[test]
fn presets_are_listed() {
    let o = gradlab(&["presets"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.contains("open-mu-one"));
}
