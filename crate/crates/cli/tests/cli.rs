use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cuspsum(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspsum"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("CUSPSUM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn coeffs_csv_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("delta.csv");
    let o = cuspsum(dir.path(), &["coeffs", "--form", "delta", "-N", "10", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[1], "1,1,1.0");
    let second: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(&second[..2], &["2", "-24"]);
    let norm: f64 = second[2].parse().unwrap();
    assert!((norm + 0.5303300858899106).abs() < 1e-12);
    assert_eq!(lines[10], format!("10,-115920,{:?}", -115920.0 / 10f64.powf(5.5)));
}

#[test]
fn cache_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let first = cuspsum(dir.path(), &["coeffs", "--form", "delta-e4", "-N", "300"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let cached = fs::read_to_string(&files[0]).unwrap();
    let header: Vec<&str> = cached.lines().next().unwrap().split(' ').collect();
    assert_eq!(header[0], "16");
    assert_eq!(header[1], "300");
    assert_eq!(cached.lines().count(), 301);
    // a second run reads the cache; a smaller order is served from it
    let second = cuspsum(dir.path(), &["coeffs", "--form", "delta-e4", "-N", "300"]);
    assert_eq!(stdout(&first), stdout(&second));
    let smaller = cuspsum(dir.path(), &["coeffs", "--form", "delta-e4", "-N", "100"]);
    assert!(stdout(&first).starts_with(&stdout(&smaller)));
    let printed = stdout(&first);
    let values: Vec<&str> = printed.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    let stored: Vec<&str> = cached.lines().skip(1).collect();
    assert_eq!(values, stored);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cuspsum"))
        .args(["coeffs", "--form", "delta", "-N", "5"])
        .env("CUSPSUM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn invalid_recipe_names_the_term() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["coeffs", "--form", "D + E4", "-N", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E4"), "{}", stderr(&o));
}

#[test]
fn unknown_suite_lists_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for suite in ["identity", "asymptotic", "modular", "quadrature", "progression", "all"] {
        assert!(err.contains(suite), "{err}");
    }
}

#[test]
fn zero_denominator_is_an_invalid_twist() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["scan", "--alpha", "1/0", "-X", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).to_lowercase().contains("twist"), "{}", stderr(&o));
}

#[test]
fn sums_match_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["--format", "json", "sum", "--mod", "2", "--res", "1", "-x", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"]["sum"], "5083");
    let o = cuspsum(dir.path(), &["--format", "json", "sum", "--alpha", "1/2", "-x", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"]["sum"]["re"].as_f64().unwrap(), -25.0);
}

#[test]
fn scan_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let args = ["scan", "--alpha", "1/3", "-X", "20000", "--trace", trace.to_str().unwrap()];
    let a = cuspsum(dir.path(), &args);
    assert!(a.status.success(), "{}", stderr(&a));
    let trace_a = fs::read(&trace).unwrap();
    let mut single = vec!["--threads", "1"];
    single.extend_from_slice(&args);
    let b = cuspsum(dir.path(), &single);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(trace_a, fs::read(&trace).unwrap());
    let text = String::from_utf8(trace_a).unwrap();
    assert_eq!(text.lines().next(), Some("x,re,im,normalized"));
    assert_eq!(text.lines().count(), 20_001);
    assert!(stdout(&a).contains("sign_changes"));
}

#[test]
fn fvalue_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(
        dir.path(),
        &["--format", "json", "fvalue", "--sigma", "1", "--alpha", "1/3", "--t", "2.5", "-N", "20000"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["values"]["relative_difference"].as_f64().unwrap() < 1e-10);
}

#[test]
fn coverage_shortfall_exits_with_budget_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["fvalue", "--sigma", "0.05", "--route", "direct", "-N", "500"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn kloosterman_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["--format", "json", "kloosterman", "-m", "0", "-n", "0", "-c", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["values"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let o = cuspsum(
        dir.path(),
        &["--format", "json", "kloosterman", "-m", "0", "-n", "1", "--mod", "2", "--res", "1"],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["values"]["aggregate"].as_f64().unwrap() - (1.0 + 1.0 / 4096.0)).abs() < 1e-14);
}

#[test]
fn quadrature_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "quadrature"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("[PASS]").count(), 3);
}

#[test]
fn modular_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "modular", "-N", "2000"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("[PASS]").count(), 12);
}
