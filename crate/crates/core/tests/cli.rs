mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ordpat::{read_csv, DependenceReport};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn ordpat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordpat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ordpat(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden_pair() -> (String, String) {
    (
        fixture("golden_x.csv").display().to_string(),
        fixture("golden_y.csv").display().to_string(),
    )
}

fn field<'a>(tsv: &'a str, name: &str) -> &'a str {
    tsv.lines()
        .find_map(|l| l.strip_prefix(name).and_then(|r| r.strip_prefix('\t')))
        .unwrap_or_else(|| panic!("no field {name}"))
}

#[test]
fn dist_matches_golden_table() {
    let (x, _) = golden_pair();
    let got = stdout(&["dist", "--x", &x, "--h", "3"]);
    assert_eq!(
        got,
        fs::read_to_string(fixture("golden_dist_h3.tsv")).unwrap()
    );
}

#[test]
fn analyze_matches_golden_table() {
    let (x, y) = golden_pair();
    let got = stdout(&["analyze", "--x", &x, "--y", &y, "--h", "3"]);
    assert_eq!(
        got,
        fs::read_to_string(fixture("golden_analyze_h3.tsv")).unwrap()
    );
}

#[test]
fn dist_lists_every_pattern() {
    let (x, _) = golden_pair();
    for h in 1..=4usize {
        let got = stdout(&["dist", "--x", &x, "--h", &h.to_string()]);
        let fact: usize = (1..=h + 1).product();
        // header, one row per pattern, totals
        assert_eq!(got.lines().count(), fact + 2, "h={h}");
    }
}

#[test]
fn analyze_json_round_trips() {
    let (x, y) = golden_pair();
    let got = stdout(&[
        "analyze", "--x", &x, "--y", &y, "--h", "2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&got).unwrap();
    assert_eq!(v["mode"], "sliding");
    let report: DependenceReport = serde_json::from_value(v["report"].clone()).unwrap();
    let xs = read_csv(fixture("golden_x.csv"), "key", "value").unwrap();
    let ys = read_csv(fixture("golden_y.csv"), "key", "value").unwrap();
    let direct = ordpat::analyze_pair(&xs, &ys, &ordpat::PatternConfig::sliding(2)).unwrap();
    assert_eq!(report, direct);
}

#[test]
fn markdown_output_is_a_table() {
    let (x, y) = golden_pair();
    let got = stdout(&["analyze", "--x", &x, "--y", &y, "--format", "md"]);
    let lines: Vec<&str> = got.lines().collect();
    assert!(lines[0].starts_with('|') && lines[1].contains("---"));
    assert!(lines.iter().all(|l| l.starts_with('|') && l.ends_with('|')));
}

#[test]
fn block_mode_window_count() {
    let (x, y) = golden_pair();
    let got = stdout(&[
        "analyze", "--x", &x, "--y", &y, "--h", "3", "--mode", "block",
    ]);
    assert_eq!(field(&got, "mode"), "block");
    assert_eq!(field(&got, "n_windows"), "167");
}

#[test]
fn delay_zero_equals_analyze() {
    let (x, y) = golden_pair();
    let scan = stdout(&["delay", "--x", &x, "--y", &y, "--h", "3"]);
    let rows: Vec<Vec<&str>> = scan
        .lines()
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(
        rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
        ["-1", "0", "1"]
    );
    let plain = stdout(&["analyze", "--x", &x, "--y", &y, "--h", "3"]);
    let zero = &rows[1];
    assert_eq!(zero[1], field(&plain, "n_windows"));
    assert_eq!(zero[2], field(&plain, "n_coincident"));
    assert_eq!(zero[3], field(&plain, "n_reflected"));
    assert_eq!(zero[7], field(&plain, "beta_tilde"));
    // shifted overlaps lose one point
    assert_eq!(rows[0][1], "499");
    assert_eq!(rows[2][1], "499");
}

#[test]
fn delay_too_large_is_rejected() {
    let (x, y) = golden_pair();
    let out = ordpat(&[
        "delay",
        "--x",
        &x,
        "--y",
        &y,
        "--from-delay",
        "0",
        "--to-delay",
        "500",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: delay-too-large"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn rolling_full_window_equals_analyze() {
    let (x, y) = golden_pair();
    let roll = stdout(&[
        "rolling", "--x", &x, "--y", &y, "--h", "3", "--window", "503",
    ]);
    let lines: Vec<&str> = roll.lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(
        header.len(),
        7 + 6,
        "default watch list adds two columns per pattern"
    );
    let row: Vec<&str> = lines[1].split('\t').collect();
    let plain = stdout(&["analyze", "--x", &x, "--y", &y, "--h", "3"]);
    assert_eq!((row[0], row[1]), ("0", "502"));
    assert_eq!(row[2], field(&plain, "n_windows"));
    assert_eq!(row[4], field(&plain, "n_reflected"));
    assert_eq!(row[6], field(&plain, "beta_tilde"));
}

#[test]
fn rolling_drops_partial_window() {
    let (x, y) = golden_pair();
    let roll = stdout(&[
        "rolling", "--x", &x, "--y", &y, "--h", "2", "--window", "100", "--step", "50",
    ]);
    // starts 0, 50, ..., 400
    assert_eq!(roll.lines().count(), 1 + 9);
    let last: Vec<&str> = roll.lines().last().unwrap().split('\t').collect();
    assert_eq!((last[0], last[1]), ("400", "499"));
}

#[test]
fn simulate_is_deterministic_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).display().to_string();
    let run = |seed: &str, tag: &str| {
        stdout(&[
            "simulate",
            "--kind",
            "walk",
            "--n",
            "200",
            "--seed",
            seed,
            "--out-x",
            &path(&format!("x{tag}.csv")),
            "--out-y",
            &path(&format!("y{tag}.csv")),
        ]);
        fs::read(path(&format!("x{tag}.csv"))).unwrap()
    };
    let a = run("5", "a");
    let b = run("5", "b");
    let c = run("6", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn simulated_ar1_has_requested_increment_correlation() {
    let dir = tempfile::tempdir().unwrap();
    let (px, py) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    stdout(&[
        "simulate",
        "--kind",
        "ar1",
        "--n",
        "5791",
        "--seed",
        "3",
        "--out-x",
        px.to_str().unwrap(),
        "--out-y",
        py.to_str().unwrap(),
    ]);
    let x = read_csv(&px, "key", "value").unwrap();
    let y = read_csv(&py, "key", "value").unwrap();
    let rho = ordpat::increment_correlation(&x, &y).unwrap();
    assert!((rho + 0.8).abs() < 0.05, "rho {rho}");
}

#[test]
fn simulated_walk_increments_have_unit_variance() {
    let dir = tempfile::tempdir().unwrap();
    let (px, py) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    stdout(&[
        "simulate",
        "--kind",
        "walk",
        "--n",
        "5000",
        "--seed",
        "9",
        "--out-x",
        px.to_str().unwrap(),
        "--out-y",
        py.to_str().unwrap(),
    ]);
    for p in [&px, &py] {
        let s = read_csv(p, "key", "value").unwrap();
        let d: Vec<f64> = s.values().windows(2).map(|w| w[1] - w[0]).collect();
        let m = common::mean(&d);
        let var = d.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (d.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.1, "variance {var}");
    }
}

#[test]
fn inject_zero_outliers_copies_input() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = golden_pair();
    let (ox, oy) = (dir.path().join("ox.csv"), dir.path().join("oy.csv"));
    let summary = stdout(&[
        "inject",
        "--x",
        &x,
        "--y",
        &y,
        "--k",
        "0",
        "--out-x",
        ox.to_str().unwrap(),
        "--out-y",
        oy.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&ox).unwrap(), fs::read(&x).unwrap());
    assert_eq!(fs::read(&oy).unwrap(), fs::read(&y).unwrap());
    assert_eq!(
        field(&summary, "corr_before"),
        field(&summary, "corr_after")
    );
}

#[test]
fn inject_too_many_outliers_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = golden_pair();
    let out = ordpat(&[
        "inject",
        "--x",
        &x,
        "--y",
        &y,
        "--k",
        "504",
        "--out-x",
        dir.path().join("a.csv").to_str().unwrap(),
        "--out-y",
        dir.path().join("b.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: too-many-outliers"));
}

#[test]
fn constant_series_has_single_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.csv");
    let body: String = (0..20).map(|i| format!("{i},1.5\n")).collect();
    fs::write(&p, format!("key,value\n{body}")).unwrap();
    let got = stdout(&["dist", "--x", p.to_str().unwrap(), "--h", "2"]);
    let nonzero: Vec<&str> = got
        .lines()
        .skip(1)
        .filter(|l| l.starts_with('(') && !l.split('\t').nth(2).unwrap().eq("0"))
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert!(
        nonzero[0].starts_with("(0,1,2)\t0\t18\t1.000000"),
        "{}",
        nonzero[0]
    );
}

#[test]
fn epsilon_merges_small_differences() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("n.csv");
    let body: String = (0..30)
        .map(|i| format!("{i},{}\n", if i % 2 == 0 { 1.0 } else { 1.001 }))
        .collect();
    fs::write(&p, format!("key,value\n{body}")).unwrap();
    let got = stdout(&[
        "dist",
        "--x",
        p.to_str().unwrap(),
        "--h",
        "2",
        "--epsilon",
        "0.01",
    ]);
    assert!(got.contains("(0,1,2)\t0\t28\t1.000000"));
}

#[test]
fn order_above_limit_is_rejected() {
    let (x, _) = golden_pair();
    let out = ordpat(&["dist", "--x", &x, "--h", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: unsupported-order"), "{err}");
}

#[test]
fn input_errors_are_single_lines() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "key,value\na,1\nb,x\n").unwrap();
    let missing = dir.path().join("missing.csv");
    let cases: [(Vec<String>, &str); 3] = [
        (
            vec!["dist".into(), "--x".into(), bad.display().to_string()],
            "error: parse",
        ),
        (
            vec!["dist".into(), "--x".into(), missing.display().to_string()],
            "error: io",
        ),
        (
            vec![
                "dist".into(),
                "--x".into(),
                bad.display().to_string(),
                "--value".into(),
                "price".into(),
            ],
            "error: missing-column",
        ),
    ];
    for (args, prefix) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = ordpat(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with(prefix), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1);
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let out = ordpat(&["analyze", "--h", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: usage"));
    assert!(ordpat(&["--help"]).status.success());
}
