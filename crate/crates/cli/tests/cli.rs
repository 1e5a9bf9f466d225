//! End-to-end runs of the `motivic` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_motivic"));
    c.env_remove("MOTIVIC_LOG_LEVEL");
    c
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], files: &[(&str, &Path)]) -> Output {
    let mut c = bin();
    c.args(args);
    for (flag, path) in files {
        c.arg(flag).arg(path);
    }
    c.output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn error(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"].clone()
}

fn mono(c: &str, k: i64) -> Value {
    json!({"c": c, "k": k})
}

fn motive_json(entries: Value) -> String {
    let rows = entries.as_array().unwrap();
    json!({"r": rows[0].as_array().unwrap().len(), "d": rows.len(), "entries": entries}).to_string()
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn kato_pair_of_tate_curve() {
    let dir = TempDir::new().unwrap();
    // c = 2, n = 5, r = 2, s = 3: u = 2 pi^13
    let m = write(&dir, "tate.json", &motive_json(json!([[mono("2", 13)]])));
    let out = run(&["kato-pair", "--n", "5"], &[("--motive", &m)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["command"], "kato-pair");
    assert_eq!(r["results"]["pair"]["N"]["entries"], json!([[3]]));
    assert_eq!(r["results"]["pair"]["classical"]["cls"], json!([[mono("2", 0)]]));
    assert_eq!(r["results"]["extends_over_R"], json!(false));
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == json!(true)));
}

#[test]
fn model_algebra_of_pi_is_powers_of_pi() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "pi.json", &motive_json(json!([[mono("1", 1)]])));
    let out = run(&["model-algebra", "--n", "5"], &[("--motive", &m)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let table = &r["results"]["algebra"]["b"][0];
    for k in 0..5 {
        assert_eq!(table[k.to_string()], mono("1", k));
    }
    assert_eq!(r["results"]["integrality"]["integral"], json!(true));
}

#[test]
fn dieudonne_from_mu_file() {
    let dir = TempDir::new().unwrap();
    let mu = write(&dir, "mu.json", "[[1, 2]]");
    let out = run(&["dieudonne", "--p", "5", "--m", "3"], &[("--mu", &mu)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["F"]["modulus"], json!(125));
    assert_eq!(r["results"]["F"]["rows"], json!([[5, 0, 0], [0, 1, 0], [0, 0, 1]]));
    assert_eq!(r["results"]["V"]["rows"], json!([[1, 0, 0], [0, 5, 0], [0, 0, 5]]));
    assert_eq!(r["results"]["N"]["rows"], json!([[0, 0, 0], [1, 0, 0], [2, 0, 0]]));
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all", "--seed", "0"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["results"].as_object().unwrap().len(), 12);
}

#[test]
fn malformed_json_reports_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"r\":1,\n \"d\":1,\n \"entries\": [[{\"c\":\"2\" \"k\":1}]]}");
    let out = run(&["monodromy"], &[("--motive", &bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let e = error(&out);
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["location"]["line"], json!(3));
    assert_eq!(e["location"]["column"], json!(24));
}

#[test]
fn point_limit_is_enforced() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &motive_json(json!([[mono("1", 1), mono("1", 1), mono("1", 1)]])));
    let out = run(&["model-algebra", "--n", "50", "--limit-points", "1000"], &[("--motive", &m)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error(&out)["kind"], "limit");
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = run(&["monodromy"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error(&out)["kind"], "usage");
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &motive_json(json!([[mono("3/7", -4), mono("-2", 9)], [mono("5", 2), mono("1", -1)]])));
    let a = run(&["decompose"], &[("--motive", &m)]);
    let b = run(&["decompose"], &[("--motive", &m)]);
    assert_eq!(strip_timing(report(&a)), strip_timing(report(&b)));

    // the digest covers content, not the path
    let copy = write(&dir, "copy.json", &std::fs::read_to_string(&m).unwrap());
    let c = run(&["decompose"], &[("--motive", &copy)]);
    assert_eq!(report(&a)["inputs_digest"], report(&c)["inputs_digest"]);

    let v1 = run(&["verify", "--suite", "baer", "--seed", "7"], &[]);
    let v2 = run(&["verify", "--suite", "baer", "--seed", "7"], &[]);
    assert_eq!(strip_timing(report(&v1)), strip_timing(report(&v2)));
}

#[test]
fn decomposed_parts_roundtrip_as_motives() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &motive_json(json!([[mono("3/7", -4), mono("-2", 9)]])));
    let r = report(&run(&["decompose"], &[("--motive", &m)]));
    let u1 = write(&dir, "u1.json", &r["results"]["u1"].to_string());
    let again = report(&run(&["monodromy"], &[("--motive", &u1)]));
    assert_eq!(again["results"]["mu"], json!([[0, 0]]));
    assert_eq!(again["results"]["good_reduction"], json!(true));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &motive_json(json!([[mono("2", 13)]])));
    let dest = dir.path().join("report.json");
    let out = run(&["eta-class", "--n", "5"], &[("--motive", &m), ("--out", &dest)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dest).unwrap()).unwrap();
    assert_eq!(r["command"], "eta-class");
}

#[test]
fn human_rendering() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &motive_json(json!([[mono("1", 1)]])));
    let out = run(&["monodromy", "--human"], &[("--motive", &m)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: monodromy"));
    assert!(text.contains("[PASS] u2_has_same_monodromy"));
}

#[test]
fn log_level_from_environment() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &motive_json(json!([[mono("1", 1)]])));
    let quiet = run(&["monodromy"], &[("--motive", &m)]);
    assert!(quiet.stderr.is_empty());
    let loud = bin().env("MOTIVIC_LOG_LEVEL", "debug").arg("monodromy").arg("--motive").arg(&m).output().unwrap();
    assert!(String::from_utf8_lossy(&loud.stderr).contains("DEBUG"));
    assert_eq!(strip_timing(report(&quiet)), strip_timing(report(&loud)));
}
