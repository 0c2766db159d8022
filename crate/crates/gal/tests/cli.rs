use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gal"))
        .args(args)
        .env_remove("GAL_LOG")
        .env_remove("GAL_JOBS")
        .output()
        .expect("spawn gal")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn malformed_json_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", "{\"n\": 4,");
    let out = gal(&["predict", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn unknown_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "x.json",
        r#"{"n": 4, "r": 1, "init": {"kind": "uniform"}, "nn": 3}"#,
    );
    assert_eq!(gal(&["predict", s(&p)]).status.code(), Some(2));
}

#[test]
fn missing_file_is_a_failure() {
    assert_eq!(
        gal(&["predict", "/nonexistent/x.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn wht_needs_power_of_two() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "n12.json",
        r#"{"n": 12, "r": 2, "init": {"kind": "uniform"}}"#,
    );
    let out = gal(&["simulate", s(&p), "--method", "wht"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("power of two"));
    assert_eq!(gal(&["simulate", s(&p)]).status.code(), Some(0));
}

#[test]
fn four_states_one_marked() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "n4.json",
        r#"{"n": 4, "r": 1, "init": {"kind": "uniform"}}"#,
    );
    let out = gal(&["predict", s(&p), "--format", "json"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let sum = &v["summary"];
    assert!((sum["omega"].as_f64().unwrap() - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
    assert!((sum["p_max"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let p1 = v["rows"][1]["p_analytic"].as_f64().unwrap();
    assert!((p1 - 1.0).abs() < 1e-12);
}

#[test]
fn plan_for_1024_states() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "n.json",
        r#"{"n": 1024, "r": 1, "init": {"kind": "uniform"}}"#,
    );
    let out = gal(&["plan", s(&p)]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["known_moments"]["t_int"][0], 25);
    let two = &v["two_time"];
    assert_eq!(
        two["t2"].as_u64().unwrap() - two["t1"].as_u64().unwrap(),
        25
    );
    assert_eq!(two["bound_holds"], true);
}

#[test]
fn two_time_plan_ignores_moments() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.json",
        r#"{"n": 256, "r": 2, "init": {"kind": "uniform"}}"#,
    );
    let b = write(
        &dir,
        "b.json",
        r#"{"n": 256, "r": 2, "init": {"kind": "random_complex", "seed": 3}}"#,
    );
    let (oa, ob) = (
        gal(&["plan", s(&a), "--two-time"]),
        gal(&["plan", s(&b), "--two-time"]),
    );
    assert!(oa.status.success());
    assert_eq!(oa.stdout, ob.stdout);
    let v = json_stdout(&oa);
    assert!(v.get("known_moments").is_none());
    assert!(v["two_time"].get("p_t1").is_none());
}

#[test]
fn dead_instance_is_hopeless() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "d.json",
        r#"{"n": 64, "r": 1, "init": {"kind": "worst_case"}}"#,
    );
    let out = gal(&["plan", s(&p)]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json_stdout(&out)["strategy"], "Hopeless");
    assert_eq!(gal(&["plan", s(&p), "--two-time"]).status.code(), Some(0));
}

#[test]
fn compare_passes_and_perturbation_is_caught() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "c.json",
        r#"{"n": 128, "r": 3, "init": {"kind": "random_complex", "seed": 11}}"#,
    );
    for method in ["direct", "wht"] {
        let out = gal(&["compare", s(&p), "--method", method, "--format", "json"]);
        assert!(
            out.status.success(),
            "{method}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let d = &json_stdout(&out)["summary"]["divergence"];
        assert!(d["max_p"].as_f64().unwrap() <= 1e-10);
        assert_eq!(d["global_phase_aligned"], method == "wht");
    }
    let out = gal(&["compare", s(&p), "--perturb-omega", "1e-4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn csv_out_writes_summary_sibling() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "c.json",
        r#"{"n": 32, "r": 2, "init": {"kind": "uniform"}}"#,
    );
    let csv = dir.path().join("run.csv");
    let out = gal(&["compare", s(&p), "--t-max", "5", "--out", s(&csv)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 7);
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["t_max"], 5);
    assert_eq!(summary["command"], "compare");
}

#[test]
fn seed_flag_overrides_file() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "r.json",
        r#"{"n": 16, "r": 1, "init": {"kind": "random_complex", "seed": 1}}"#,
    );
    let a = gal(&["predict", s(&p), "--t-max", "3"]);
    let b = gal(&["predict", s(&p), "--t-max", "3", "--seed", "2"]);
    let c = gal(&["predict", s(&p), "--t-max", "3", "--seed", "1"]);
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn sweep_is_reproducible_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "s.json",
        r#"{"n": 256, "r": 1, "noise_levels": [0.0, 0.1, 0.3], "seeds_per_level": 6, "base_seed": 40}"#,
    );
    let one = gal(&["sweep", s(&p), "--jobs", "1"]);
    let four = gal(&["sweep", s(&p), "--jobs", "4"]);
    assert!(
        one.status.success(),
        "{}",
        String::from_utf8_lossy(&one.stderr)
    );
    assert_eq!(one.stdout, four.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].ends_with("t_star_std,within_3se"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn sweep_rejects_negative_noise() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "s.json",
        r#"{"n": 16, "r": 1, "noise_levels": [-0.1], "seeds_per_level": 2}"#,
    );
    assert_eq!(gal(&["sweep", s(&p)]).status.code(), Some(2));
}

#[test]
fn trajectory_csv_matches_golden() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "n8.json",
        r#"{"n": 8, "marked": [5], "init": {"kind": "uniform"}}"#,
    );
    let out = gal(&["compare", s(&p), "--t-max", "3"]);
    assert!(out.status.success());
    let golden = include_str!("golden/compare_n8.csv");
    let got = String::from_utf8(out.stdout).unwrap();
    let (gl, ol): (Vec<&str>, Vec<&str>) = (golden.lines().collect(), got.lines().collect());
    assert_eq!(gl.len(), ol.len());
    assert_eq!(gl[0], ol[0]);
    // Values are compared numerically; the last digit is platform libm territory.
    for (g, o) in gl[1..].iter().zip(&ol[1..]) {
        for (a, b) in g.split(',').zip(o.split(',')).skip(1) {
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!((x - y).abs() <= 1e-14, "{a} vs {b}"),
                _ => assert_eq!(a, b),
            }
            if !b.is_empty() {
                assert!(fixed_width(b), "{b}");
            }
        }
    }
    // Uniform start, N = 8: P(t) = sin²((2t+1)·asin(1/√8)).
    for (t, exact) in [(1, 25.0 / 32.0), (2, 121.0 / 128.0), (3, 169.0 / 512.0)] {
        let fields: Vec<&str> = ol[t + 1].split(',').collect();
        for col in [1, 2] {
            assert!((fields[col].parse::<f64>().unwrap() - exact).abs() < 1e-15);
        }
    }
}

/// `-?d.ddddddddddddddde[+-]dd`
fn fixed_width(x: &str) -> bool {
    let x = x.strip_prefix('-').unwrap_or(x);
    let Some((m, e)) = x.split_once('e') else {
        return false;
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    m.len() == 17
        && m.as_bytes()[1] == b'.'
        && digits(&m[..1])
        && digits(&m[2..])
        && (e.starts_with('+') || e.starts_with('-'))
        && e.len() >= 3
        && digits(&e[1..])
}
