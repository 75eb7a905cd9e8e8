use std::path::Path;
use std::process::{Command, Output};

fn seeley(args: &[&str]) -> Output {
    seeley_env(args, None)
}

fn seeley_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_seeley"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SEELEY_THREADS", t),
        None => cmd.env_remove("SEELEY_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
fn coeffs_for_k3() {
    let o = seeley(&["coeffs", "--k", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for c in ["45/7", "-15/2", "9/4", "-5/28"] {
        assert!(out.contains(&format!(",{c},")), "{out}");
    }
    assert_eq!(column(&out, "shadow"), vec![45.0 / 7.0, -7.5, 2.25, -5.0 / 28.0]);
}

#[test]
fn constant_is_reproduced_near_the_boundary() {
    let o = seeley(&["extend1d", "--function", "constant:1", "--grid", "0.0005:0.01:20", "--k", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let f = column(&stdout(&o), "f");
    assert_eq!(f.len(), 20);
    assert!(f.iter().all(|v| *v == 1.0), "{f:?}");
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!("grid = \"0:1:5\"\noutput = {:?}\n\n[operator]\nb = 0.0\ntau = 0.5\n", out.display().to_string()),
    )
    .unwrap();
    let o = seeley(&["extend1d", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.toml:6: operator.tau"), "{}", stderr(&o));
    assert!(!out.exists());
    assert!(!out.with_extension("json").exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let o = seeley(&["extend1d", "--grid", "0:1:5", "--a", "-1", "--tau", "-0.5", "--kappa", "-0.4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--kappa"), "{}", stderr(&o));
}

#[test]
fn flags_override_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"grid": "0:1:3", "operator": {"tau": -2.0, "k": 2}, "function": {"kind": "monomial", "power": 2}}"#,
    )
    .unwrap();
    let out = dir.path().join("run.csv");
    let o = seeley(&[
        "extend1d",
        "--config",
        cfg.to_str().unwrap(),
        "--grid",
        "0.5:1.5:3",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(column(&csv, "t"), vec![0.5, 1.0, 1.5]);
    let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["operator"]["tau"], "-2.0000000000000000e0");
    assert_eq!(meta["coefficients"][1]["exact"], "-5");
    assert!(meta["elapsed_seconds"].is_number());
    // t = 1.5 is still inside (b, 2b - tau)
    assert!(column(&csv, "f")[2] != 0.0);
}

fn artifacts(dir: &Path, name: &str, threads: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--output", out.to_str().unwrap()]);
    let o = seeley_env(&all, Some(threads));
    assert!(o.status.success(), "{}", stderr(&o));
    std::fs::read(out).unwrap()
}

#[test]
fn output_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["extend1d", "--function", "exp-cos", "--x", "0.3", "--grid", "-0.5:1.2:40", "--ell", "2"],
        &["extend-quadrant", "--grid", "-0.2:0.6:9", "--k", "2", "--ell", "1", "--direction", "0.5,1"],
        &["extend-disk", "--grid", "-1.5:1.5:11", "--k", "2", "--ell", "1"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let one = artifacts(dir.path(), &format!("a{i}.csv"), "1", args);
        let four = artifacts(dir.path(), &format!("b{i}.csv"), "4", args);
        assert_eq!(one, four, "{args:?}");
    }
}

#[test]
fn ball_and_disk_agree() {
    let args = ["--grid", "-1.3:1.3:9", "--k", "2"];
    let ball = seeley(&[&["extend-ball"], &args[..]].concat());
    let disk = seeley(&[&["extend-disk"], &args[..]].concat());
    assert!(ball.status.success() && disk.status.success());
    let (b, d) = (column(&stdout(&ball), "f"), column(&stdout(&disk), "f"));
    for (x, y) in b.iter().zip(&d) {
        assert!((x - y).abs() < 1e-10, "{x} {y}");
    }
}

#[test]
fn cutoff_jet() {
    let o = seeley(&["cutoff", "--lo", "-1", "--hi", "-0.5", "--order", "3", "--at", "-2,-0.75,-0.25"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(column(&out, "d0"), vec![0.0, 0.5, 1.0]);
    assert_eq!(column(&out, "d3")[0], 0.0);
    assert!(column(&out, "d1")[1] > 0.0);
    assert!(!seeley(&["cutoff", "--lo", "1", "--hi", "0", "--at", "0"]).status.success());
}

#[test]
fn verify_reports() {
    let o = seeley(&["verify", "--suite", "vanishing", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 5);
    assert!(!report["reports"].as_array().unwrap().is_empty());
    let again = seeley(&["verify", "--suite", "vanishing", "--seed", "5"]);
    assert_eq!(o.stdout, again.stdout);
    assert_eq!(seeley(&["verify", "--suite", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = seeley_env(&["coeffs", "--k", "1"], Some("zero"));
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}
