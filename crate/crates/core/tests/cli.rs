use std::path::Path;
use std::process::{Command, Output};

use dynforms::fourier::{random_real_series, FourierSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynforms")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_series(dir: &Path, name: &str, s: &FourierSeries) -> String {
    let path = dir.join(name);
    std::fs::write(&path, s.to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn models_list_and_show() {
    let o = run(&["models", "list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("sl2-geodesic") && out.contains("sl2-horocycle-plus"));

    let o = run(&["models", "show", "sl2-geodesic"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dω0 = ω+∧ω-"));

    let o = run(&["models", "show", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["report"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["report", "--model", "torus", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn torus_report() {
    let o = run(&["report", "--model", "torus", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("H^k(M/X) (1, 2, 1, 0)"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn sl2_reports() {
    let o = run(&["report", "--model", "sl2-geodesic", "--genus", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("constraint dim H^0_C - dim H^1_C = 1"));
    assert!(out.contains("H^2_C = 1"));

    let o = run(&["report", "--model", "sl2-horocycle-plus", "--genus", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let ladder = v["sections"].as_array().unwrap().iter().find(|s| s["name"] == "cokernel ladder").unwrap();
    let h_c: Vec<_> = ladder["data"]["h_c"].as_array().unwrap().iter().map(|t| t["dim"]["value"].as_u64()).collect();
    assert_eq!(h_c, vec![Some(4), Some(4), Some(1)]);
}

#[test]
fn text_and_json_carry_the_same_lines() {
    let text = stdout(&run(&["report", "--model", "torus", "--n", "2"]));
    let json: serde_json::Value =
        serde_json::from_slice(&run(&["report", "--model", "torus", "--n", "2", "--format", "json"]).stdout).unwrap();
    for s in json["sections"].as_array().unwrap() {
        for l in s["lines"].as_array().unwrap() {
            assert!(text.contains(l.as_str().unwrap()));
        }
    }
}

#[test]
fn model_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["models", "show", "sl2-horocycle-minus", "--format", "json"]);
    let path = dir.path().join("model.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let a = run(&["report", "--model-file", path.to_str().unwrap(), "--format", "json"]);
    let b = run(&["report", "--model", "sl2-horocycle-minus", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    std::fs::write(&path, r#"{"generators": ["a"], "d": {"a": "b∧b"}, "iX": {}}"#).unwrap();
    assert_eq!(run(&["report", "--model-file", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn solve_torus_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = write_series(dir.path(), "g.json", &random_real_series(&mut rng, 8, 10));
    let out = dir.path().join("f.json");
    let o = run(&["solve-torus", "--alpha", "golden", "--coeffs", &g, "--output", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["diagnostics"]["residual"].as_f64().unwrap() < 1e-12);
    assert!(FourierSeries::load(&out).unwrap().is_real());

    let mut constant = FourierSeries::new();
    constant.terms.insert((0, 0), num_complex::Complex64::new(2.0, 0.0));
    let c = write_series(dir.path(), "c.json", &constant);
    let o = run(&["solve-torus", "--alpha", "golden", "--coeffs", &c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("obstruction"));
    assert_eq!(run(&["solve-torus", "--alpha", "golden", "--coeffs", &c, "--subtract-mean"]).status.code(), Some(0));

    let mut resonant = FourierSeries::new();
    resonant.terms.insert((1, -2), num_complex::Complex64::new(1.0, 0.0));
    let r = write_series(dir.path(), "r.json", &resonant);
    assert_eq!(run(&["solve-torus", "--alpha", "1/2", "--coeffs", &r]).status.code(), Some(3));
    assert_eq!(run(&["solve-torus", "--alpha", "golden", "--coeffs", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn verify_all_is_deterministic_and_catches_faults() {
    let a = run(&["verify-all", "--seed", "7"]);
    let b = run(&["verify-all", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);

    let f = run(&["verify-all", "--inject-fault", "corrupt-table"]);
    assert_eq!(f.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&f.stderr).contains("failed: operator tables"));
    assert!(stdout(&f).contains("mismatch"));
}
