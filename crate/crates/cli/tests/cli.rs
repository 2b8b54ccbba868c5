use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn chainqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainqc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("chainqc-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn mirror_csv_alternates_outer_spins() {
    let o = chainqc(&["mirror", "--spins", "3", "--cycles", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("cycle,site,sx,sy,sz,label"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').take(5).map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 12);
    for row in &rows {
        let (cycle, site) = (row[0] as usize, row[1] as usize);
        let (sx, sz) = (row[2], row[4]);
        match (cycle % 2, site) {
            (1, 1) | (0, 3) => assert!((sx - 1.0).abs() < 1e-9),
            (1, 3) | (0, 1) => assert!((sz - 1.0).abs() < 1e-9),
            (_, 2) => assert!((sx + 1.0).abs() < 1e-9),
            _ => unreachable!(),
        }
    }
}

#[test]
fn mirror_rejects_zero_cycles() {
    assert_eq!(chainqc(&["mirror", "--cycles", "0"]).status.code(), Some(2));
    assert_eq!(chainqc(&["mirror", "--spins", "11"]).status.code(), Some(2));
    assert_eq!(chainqc(&["mirror", "--baseline"]).status.code(), Some(2));
}

#[test]
fn mirror_noise_decays() {
    let o = chainqc(&["mirror", "--noise", "0.01", "--format", "json", "--baseline"]);
    assert!(o.status.success());
    let d = json(&o);
    let peaks: Vec<f64> = d["results"].as_array().unwrap().iter().map(|r| r["max_abs_readout"].as_f64().unwrap()).collect();
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
    assert_eq!(d["baseline"]["global_control_compliant"], Value::Bool(false));
    assert!(d["baseline"]["cost"]["interior_selective_pulses"].as_u64().unwrap() >= 6);
    assert_eq!(d["cost"]["interior_selective_pulses"].as_u64(), Some(0));
}

#[test]
fn mirror_accepts_kets() {
    let o = chainqc(&["mirror", "--init", "0+0", "--cycles", "1", "--readout-axis", "z"]);
    assert!(o.status.success());
}

#[test]
fn deutsch_reports() {
    let d = json(&chainqc(&["deutsch", "f01"]));
    assert_eq!(d["classification"], "balanced");
    assert!(d["cross_check_deviation"].as_f64().unwrap() < 1e-9);
    let d = json(&chainqc(&["deutsch", "f11"]));
    assert_eq!(d["classification"], "constant");
    assert_eq!(d["sites"][1]["label"], "none");
    assert_eq!(chainqc(&["deutsch", "f2"]).status.code(), Some(2));
    assert_eq!(chainqc(&["deutsch", "f0011"]).status.code(), Some(2));
}

#[test]
fn dj_reports() {
    assert_eq!(json(&chainqc(&["dj", "f1111"]))["classification"], "constant");
    assert_eq!(json(&chainqc(&["dj", "f0110"]))["classification"], "balanced");
    assert_eq!(chainqc(&["dj", "f0001"]).status.code(), Some(2));
}

#[test]
fn compile_identity_and_cnot() {
    let id = write_temp("id.json", r#"{"n_logical": 1, "gates": []}"#);
    let d = json(&chainqc(&["compile", id.to_str().unwrap(), "--block-size", "1"]));
    assert_eq!(d["sequence"]["steps"].as_array().unwrap().len(), 0);
    assert_eq!(d["cost"]["total_steps"], 0);

    let cnot = write_temp(
        "cnot.json",
        r#"{"n_logical": 3, "gates": [{"variant": "CNOT", "control": 1, "target": 3}]}"#,
    );
    let d = json(&chainqc(&["compile", cnot.to_str().unwrap(), "--block-size", "3"]));
    assert_eq!(d["sequence"]["global_control_compliant"], Value::Bool(true));
    assert_eq!(d["cost"]["storage_density"], serde_json::json!([1, 1]));
}

#[test]
fn compile_layout_size_and_errors() {
    let five = write_temp("five.json", r#"{"n_logical": 5, "gates": [{"variant": "H", "q": 5}]}"#);
    let d = json(&chainqc(&["compile", five.to_str().unwrap(), "-m", "2"]));
    assert_eq!(d["layout"]["n"], 8);
    let o = chainqc(&["compile", five.to_str().unwrap(), "-m", "2", "--blocks", "2"]);
    assert_eq!(o.status.code(), Some(4));
    let bad = write_temp("bad.json", r#"{"n_logical": 2, "gates": [{"variant": "Toffoli"}]}"#);
    assert_eq!(chainqc(&["compile", bad.to_str().unwrap(), "-m", "2"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = chainqc(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
    assert_eq!(chainqc(&["verify", "--max-spins", "12"]).status.code(), Some(2));
    assert_eq!(chainqc(&["verify", "--max-spins", "3", "--corrupt"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let a = chainqc(&["mirror", "--noise", "0.02", "--format", "json"]);
    let b = chainqc(&["mirror", "--noise", "0.02", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
