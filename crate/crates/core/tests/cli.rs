use std::path::Path;
use std::process::{Command, Output};

use steplab::harness::lacunary_tail;
use steplab::TrigPolynomial64;

fn steplab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steplab"))
        .args(args)
        .current_dir(dir)
        .env_remove("STEPLAB_SEED")
        .output()
        .expect("binary runs")
}

fn write_poly(dir: &Path) -> &'static str {
    std::fs::write(
        dir.join("p.json"),
        r#"{"terms":[{"freq":3,"re":1,"im":0},{"freq":5,"re":1,"im":0}]}"#,
    )
    .unwrap();
    "p.json"
}

#[test]
fn transform_sj() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_poly(dir.path());
    let o = steplab(
        &["transform", p, "--op", "Sj", "--j", "2", "--out", "g.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let g: TrigPolynomial64 =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(g, TrigPolynomial64::from_real_terms(&[(3.0, 1.0)]));
    let csv = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(csv.starts_with("x,re,im\n0,1e0,0e0\n"));
    // [0, 64] at step 1/32.
    assert_eq!(csv.lines().count(), 1 + 64 * 32 + 1);
}

#[test]
fn norm_prints_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_poly(dir.path());
    let o = steplab(&["norm", p, "--p", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // |e^{3ix} + e^{5ix}|² = 2 + 2cos 2x, whose unit-window sup is 2 + 2 sin 1.
    let exact = (2.0 + 2.0 * 1f64.sin()).sqrt();
    let value = v["value"].as_f64().unwrap();
    let radius = v["error_radius"].as_f64().unwrap();
    assert!(
        (value - exact).abs() <= radius + 1e-12,
        "{value} vs {exact}"
    );
    assert_eq!(v["window"], serde_json::json!([0.0, 64.0]));
}

#[test]
fn converge_csv_matches_tail() {
    let dir = tempfile::tempdir().unwrap();
    let o = steplab(&["converge", "--N", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,sup_error,tail_oracle"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let j: u32 = cols[0].parse().unwrap();
        let err: f64 = cols[1].parse().unwrap();
        let tail: f64 = cols[2].parse().unwrap();
        assert_eq!(tail, lacunary_tail(20, j));
        assert!((err - tail).abs() <= 1e-8);
        rows += 1;
    }
    assert_eq!(rows, 33);
}

#[test]
fn amalgam_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = steplab(&["amalgam", "--N", "64", "--out", "a.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "N,partial_sum,log_N");
    assert_eq!(rows.len(), 4);
    assert!(rows[3].starts_with("64,"));
}

#[test]
fn ensemble_round_trip_and_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed_flag: &str, env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_steplab"));
        c.args(["ensemble", "--count", "5", "--seed", seed_flag])
            .current_dir(dir.path())
            .env_remove("STEPLAB_SEED");
        if let Some(s) = env {
            c.env("STEPLAB_SEED", s);
        }
        let o = c.output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_slice::<Vec<TrigPolynomial64>>(&o.stdout).unwrap()
    };
    let a = run("1", None);
    assert_eq!(a.len(), 5);
    assert_eq!(run("1", None), a);
    assert_ne!(run("2", None), a);
    assert_eq!(run("2", Some("1")), a);
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"seed": 9, "suite": {"ensemble": {"count": 3}}}"#,
    )
    .unwrap();
    let o = steplab(&["ensemble", "--config", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<TrigPolynomial64> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.len(), 3);
    let o = steplab(
        &["ensemble", "--config", "c.json", "--seed", "9"],
        dir.path(),
    );
    assert_eq!(
        serde_json::from_slice::<Vec<TrigPolynomial64>>(&o.stdout).unwrap(),
        v
    );
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_poly(dir.path());
    std::fs::write(dir.path().join("bad.json"), "{ nope").unwrap();
    for args in [
        vec!["transform", p, "--op", "bogus"],
        vec!["frobnicate"],
        vec!["norm", "missing.json"],
        vec!["norm", "bad.json"],
        vec!["verify", "--config", "bad.json"],
        vec!["--window", "1", "norm", p],
        vec!["transform", p, "--op", "Sj", "--j", "-1"],
        vec!["amalgam", "--N", "8"],
        vec!["verify", "--count", "0"],
    ] {
        assert_eq!(
            steplab(&args, dir.path()).status.code(),
            Some(2),
            "{args:?}"
        );
    }
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = steplab(
        &[
            "verify",
            "--only",
            "sign_identity,lacunary",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(ok.status.code(), Some(0));
    let table = String::from_utf8(ok.stdout).unwrap();
    assert!(table.contains("sign_identity") && table.ends_with("PASS\n"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["seed"], 42);

    let bad = steplab(
        &[
            "verify",
            "--only",
            "dyadic_modulation_decomposition",
            "--mutation",
            "flip-minus-sign",
        ],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(1));
}
