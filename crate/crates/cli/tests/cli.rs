use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const DIAG21: &str = r#"{"field": "real", "k": 1, "factors": [{"dim": 2, "p": 2}], "codomain": {"dim": 2, "p": 2}, "coefficients": [2, 0, 0, 1]}"#;
const E22: &str = r#"{"field": "real", "k": 1, "factors": [{"dim": 2, "p": 2}], "codomain": {"dim": 2, "p": 2}, "coefficients": [0, 0, 0, 1]}"#;
const ID: &str = r#"{"field": "real", "k": 1, "factors": [{"dim": 2, "p": 2}], "codomain": {"dim": 2, "p": 2}, "coefficients": [1, 0, 0, 1]}"#;
const CID: &str = r#"{"field": "complex", "k": 1, "factors": [{"dim": 2, "p": 2}], "codomain": {"dim": 2, "p": 2}, "coefficients": [[1, 0], [0, 0], [0, 0], [1, 0]]}"#;
const IDIAG: &str = r#"{"field": "complex", "k": 1, "factors": [{"dim": 2, "p": 2}], "codomain": {"dim": 2, "p": 2}, "coefficients": [[0, 1], [0, 0], [0, 0], [0, -1]]}"#;
const L3: &str = r#"{"field": "real", "k": 1, "factors": [{"dim": 2, "p": 3}], "codomain": {"dim": 2, "p": 3}, "coefficients": [1, 0.3, -0.2, 0.7]}"#;

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in [("diag21", DIAG21), ("e22", E22), ("id", ID), ("cid", CID), ("idiag", IDIAG), ("l3", L3)] {
            std::fs::write(dir.path().join(format!("{name}.json")), text).unwrap();
        }
        Fixtures { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_orthkit"))
            .current_dir(self.dir.path())
            .env_remove("ORTHKIT_SEED")
            .args(args)
            .output()
            .unwrap()
    }

    fn json(&self, args: &[&str]) -> (i32, Value) {
        let mut a = args.to_vec();
        a.push("--json");
        let out = self.run(&a);
        let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
        (out.status.code().unwrap(), v)
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn orth_reports_singleton_certificate() {
    let f = Fixtures::new();
    let (code, v) = f.json(&["orth", "diag21.json", "e22.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["decision"], "OrthogonalCertified");
    assert_eq!(v["result"]["evidence"]["kind"], "caratheodory");
    assert_eq!(v["result"]["evidence"]["weights"], serde_json::json!([1.0]));
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["angle_count"], 720);
    assert_eq!(v["config"]["restarts"], 32);
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn oracle_on_diag_and_identity() {
    let f = Fixtures::new();
    let (code, v) = f.json(&["oracle", "diag21.json", "id.json"]);
    assert_eq!(code, 0);
    let lambda = &v["result"]["lambda_star"];
    assert!((lambda[0].as_f64().unwrap() + 1.5).abs() < 1e-4, "{lambda}");
    assert!((v["result"]["min_value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(v["decision"], "NotOrthogonal");
}

#[test]
fn smooth_identity_names_the_sphere() {
    let f = Fixtures::new();
    let out = f.run(&["smooth", "id.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NotSmooth"), "{text}");
    assert!(text.contains("attainment set is the full unit sphere"), "{text}");
}

#[test]
fn smooth_diag_is_smooth() {
    let f = Fixtures::new();
    let (code, v) = f.json(&["smooth", "diag21.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["decision"], "Smooth");
}

#[test]
fn heuristic_results_exit_two() {
    let f = Fixtures::new();
    assert_eq!(f.run(&["norm", "l3.json"]).status.code(), Some(2));
    let (code, v) = f.json(&["oracle", "l3.json", "l3.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "undetermined");
    assert_eq!(v["result"]["heuristic"], true);
}

#[test]
fn malformed_files_exit_one_with_diagnostics() {
    let f = Fixtures::new();
    std::fs::write(f.path("short.json"), DIAG21.replace("[2, 0, 0, 1]", "[2, 0, 0]")).unwrap();
    let out = f.run(&["norm", "short.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("coefficients") && err.contains("expected 4") && err.contains("found 3"), "{err}");

    std::fs::write(f.path("broken.json"), "{\n  \"field\": \"real\",\n  oops\n}").unwrap();
    let out = f.run(&["norm", "broken.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let out = f.run(&["norm", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shape_mismatch_exits_one() {
    let f = Fixtures::new();
    let out = f.run(&["orth", "diag21.json", "cid.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("shape"), "{}", stderr(&out));
}

#[test]
fn bad_arguments_exit_one() {
    let f = Fixtures::new();
    assert_eq!(f.run(&["orth", "diag21.json"]).status.code(), Some(1));
    assert_eq!(f.run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(f.run(&["norm", "id.json", "--angles", "2"]).status.code(), Some(1));
    assert_eq!(f.run(&["--help"]).status.code(), Some(0));
}

#[test]
fn omega_csv_is_single_point() {
    let f = Fixtures::new();
    let out = f.run(&["omega", "diag21.json", "id.json", "--csv", "omega.csv", "--svg", "omega.svg"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(f.path("omega.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,attain_residual,witness_id"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for r in rows {
        let v: Vec<f64> = r.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12, "{r}");
    }
    assert!(std::fs::read_to_string(f.path("omega.svg")).unwrap().contains("origin"));
}

#[test]
fn maxnr_csv_is_vertical_segment() {
    let f = Fixtures::new();
    let out = f.run(&["maxnr", "cid.json", "idiag.json", "--csv", "range.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(f.path("range.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,support_value,boundary_re,boundary_im"));
    let pts: Vec<(f64, f64)> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[2], v[3])
        })
        .collect();
    assert_eq!(pts.len(), 720);
    assert!(pts.iter().all(|p| p.0.abs() < 1e-9 && (p.1.abs() - 1.0).abs() < 1e-9));
    assert!(pts.iter().any(|p| p.1 > 0.0) && pts.iter().any(|p| p.1 < 0.0));
}

#[test]
fn unwritable_plot_path_exits_one() {
    let f = Fixtures::new();
    let out = f.run(&["omega", "diag21.json", "id.json", "--csv", "no/such/dir/omega.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

fn save(f: &Fixtures, name: &str, out: &Output) -> PathBuf {
    let p = f.path(name);
    std::fs::write(&p, &out.stdout).unwrap();
    p
}

#[test]
fn orth_certificates_verify() {
    let f = Fixtures::new();
    for (t, a) in [("diag21.json", "e22.json"), ("diag21.json", "id.json"), ("cid.json", "idiag.json")] {
        let report = save(&f, "report.json", &f.run(&["orth", t, a, "--json"]));
        let out = f.run(&["orth", t, a, "--verify", report.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{t} {a}: {}", stdout(&out));
        assert!(stdout(&out).contains("verification: ok"));
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let f = Fixtures::new();
    let out = f.run(&["orth", "diag21.json", "id.json", "--json"]);
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["result"]["evidence"]["margin"] = serde_json::json!(5.0);
    std::fs::write(f.path("bad.json"), v.to_string()).unwrap();
    let out = f.run(&["orth", "diag21.json", "id.json", "--verify", "bad.json", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["ok"], false);
}

#[test]
fn hilbert_witness_verifies() {
    let f = Fixtures::new();
    let (code, v) = f.json(&["bs", "cid.json", "idiag.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["decision"], "OrthogonalCertified");
    assert!(v["result"]["witness_residual"].as_f64().unwrap() <= 1e-8);
    let report = save(&f, "bs.json", &f.run(&["bs", "cid.json", "idiag.json", "--json"]));
    let out = f.run(&["bs", "cid.json", "idiag.json", "--verify", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn sip_check_on_smooth_orthogonal_pair() {
    let f = Fixtures::new();
    let (code, v) = f.json(&["sip-check", "diag21.json", "e22.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["converges_to_zero"], true);
    assert_eq!(f.run(&["sip-check", "diag21.json", "id.json"]).status.code(), Some(1));
}

#[test]
fn seed_falls_back_to_environment() {
    let f = Fixtures::new();
    let run = |env: Option<&str>, extra: &[&str]| -> Value {
        let mut c = Command::new(env!("CARGO_BIN_EXE_orthkit"));
        c.current_dir(f.dir.path()).env_remove("ORTHKIT_SEED");
        if let Some(s) = env {
            c.env("ORTHKIT_SEED", s);
        }
        let out = c.args(["norm", "diag21.json", "--json"]).args(extra).output().unwrap();
        serde_json::from_slice(&out.stdout).unwrap()
    };
    assert_eq!(run(None, &[])["config"]["seed"], 0);
    assert_eq!(run(Some("17"), &[])["config"]["seed"], 17);
    assert_eq!(run(Some("17"), &["--seed", "3"])["config"]["seed"], 3);
}

#[test]
fn timing_only_on_request() {
    let f = Fixtures::new();
    let (_, v) = f.json(&["norm", "diag21.json", "--timing"]);
    assert!(v["timing_ms"].as_f64().is_some());
    assert!(stdout(&f.run(&["norm", "diag21.json", "--timing"])).contains("elapsed"));
}

#[test]
fn structured_output_is_repeatable() {
    let f = Fixtures::new();
    for args in [["orth", "cid.json", "idiag.json", "--json"], ["smooth", "l3.json", "--json", "--seed=5"]] {
        let first = f.run(&args).stdout;
        assert_eq!(first, f.run(&args).stdout);
    }
}
