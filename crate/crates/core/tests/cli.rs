use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fista-lab"))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = r#"{
  "problem": { "family": "feasibility" },
  "x0": [5, 0],
  "iterations": 300,
  "s_refs": [[0, 1], [1, 0]],
  "analyses": ["rate_bound", "lyapunov", "structural", "momentum_identity", "bounded"]
}"#;

#[test]
fn run_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["run", cfg.to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("PASS rate_bound"));
    assert!(!stdout.contains("FAIL"));

    let csv = fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,t,Fx,delta,xi_s0,xi_s1,res_zdef,res_convex,res_suffdec,gap_xy,norm_x,norm_z"
    );
    assert_eq!(lines.count(), 301);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    let snaps: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("snapshots.json")).unwrap()).unwrap();
    assert!(snaps.is_array() || snaps.is_object());
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let mut csvs = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let out = bin()
            .args(["run", cfg.to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        csvs.push(fs::read(out_dir.join("trace.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn parallel_jobs_write_one_directory_per_config() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "first.json", SMALL);
    let b = write(dir.path(), "second.json", &SMALL.replace("300", "50"));
    let out_dir = dir.path().join("out");
    let out = bin()
        .args([
            "run",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--jobs",
            "2",
            "--output-dir",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(out_dir.join("first/trace.csv").exists());
    assert_eq!(
        fs::read_to_string(out_dir.join("second/trace.csv")).unwrap().lines().count(),
        52
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", &SMALL.replace("300", "0"));
    let unknown = write(dir.path(), "unknown.json", &SMALL.replace("\"bounded\"", "\"magic\""));
    let malformed = write(dir.path(), "bad.json", "{ not json");
    let mismatch = write(dir.path(), "dim.json", &SMALL.replace("[5, 0]", "[5, 0, 1]"));
    for cfg in [&zero, &unknown, &malformed, &mismatch] {
        let out = bin()
            .args(["run", cfg.to_str().unwrap(), "--output-dir"])
            .arg(dir.path().join("o"))
            .output()
            .unwrap();
        assert_eq!(code(&out), 2, "{}", cfg.display());
    }
    let missing = bin().args(["run", "/nonexistent/cfg.json"]).output().unwrap();
    assert_eq!(code(&missing), 2);
    assert_eq!(code(&bin().arg("frobnicate").output().unwrap()), 2);
    assert_eq!(code(&bin().args(["bcch-demo", "nope", "1000"]).output().unwrap()), 2);
    assert_eq!(code(&bin().args(["validate", "bt", "abc"]).output().unwrap()), 2);
}

#[test]
fn failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // 2 PGM iterations from (5, 0) are nowhere near the limit (1, 0)
    let cfg = write(
        dir.path(),
        "pgm.json",
        r#"{
          "problem": { "family": "feasibility" },
          "x0": [5, 0],
          "solver": "pgm",
          "iterations": 2,
          "analyses": ["final_point"],
          "expected_limit": { "point": [1, 0], "tol": 1e-6 }
        }"#,
    );
    let out = bin()
        .args(["run", cfg.to_str().unwrap(), "--output-dir"])
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL final_point"));
}

#[test]
fn validate_subcommand() {
    assert_eq!(code(&bin().args(["validate", "bt", "100000"]).output().unwrap()), 0);
    assert_eq!(code(&bin().args(["validate", "linear", "1000"]).output().unwrap()), 0);
    let ones = bin().args(["validate", "constant-ones", "100"]).output().unwrap();
    assert_eq!(code(&ones), 1);
    assert!(String::from_utf8_lossy(&ones.stdout).contains("first growth violation at k = 1"));
}

#[test]
fn bcch_demo_subcommand() {
    let out = bin().args(["bcch-demo", "ex42", "1000"]).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS h_converges"));
    assert!(text.contains("PASS g_not_converged residual=4.000e0"));
    assert_eq!(code(&bin().args(["bcch-demo", "ex44-sinh", "10000"]).output().unwrap()), 0);
    assert_eq!(code(&bin().args(["bcch-demo", "linf-plus", "10000"]).output().unwrap()), 0);
}

#[test]
fn repro_fig1_writes_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["repro-fig1", "--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("fig1_points.dat")).unwrap();
    let points: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(points.len(), 27);
    assert_eq!(points[0], vec![5.0, 0.0]);
    assert_eq!(points[1], vec![3.0, -2.0]);
    assert_eq!(points[26], vec![1.0, 0.0]);
}

#[test]
fn shipped_configs_pass() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut n = 0;
    for entry in fs::read_dir(&root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let out = bin()
                .arg("run")
                .arg(&path)
                .arg("--output-dir")
                .arg(dir.path().join(path.file_name().unwrap()))
                .output()
                .unwrap();
            assert_eq!(code(&out), 0, "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
            n += 1;
        }
    }
    assert!(n >= 2);
}

#[test]
fn scenario_config_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ex43.json", r#"{ "scenario": "ex43", "last": 100000, "limit": -2 }"#);
    let out = bin().arg("run").arg(&ok).arg("--output-dir").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(dir.path().join("o/report.json").exists());
    // the h tail of ex43 oscillates by about 2 / sqrt(K): too wide at K = 1e4
    let short = write(dir.path(), "short.json", r#"{ "scenario": "ex43", "last": 10000 }"#);
    let out = bin().arg("run").arg(&short).arg("--output-dir").arg(dir.path().join("s")).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("h_converges"));
    let bad = write(dir.path(), "bad.json", r#"{ "scenario": "ex99", "last": 1000 }"#);
    let out = bin().arg("run").arg(&bad).arg("--output-dir").arg(dir.path().join("b")).output().unwrap();
    assert_eq!(code(&out), 2);
}
