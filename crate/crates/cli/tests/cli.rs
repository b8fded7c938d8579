use std::process::{Command, Output};

fn qensemble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qensemble"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn exact_moment_row() {
    let out = qensemble(&["moments", "--N", "2", "--p-max", "2", "--q", "1/2", "--a", "-1/2", "--method", "closed"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("p,method,value\n"));
    assert!(text.contains("1,closed,3/4\n"), "{text}");
}

#[test]
fn routes_agree_under_verify() {
    let out = qensemble(&[
        "moments", "--N", "3", "--p-max", "6", "--q", "2/3", "--a", "-2", "--method", "closed,motzkin,matching,qintegral",
        "--verify", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["verified"], true);
    assert_eq!(doc["meta"]["mode"], "exact");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 7 * 4);
}

#[test]
fn odd_moments_vanish_at_minus_one() {
    let out = qensemble(&["moments", "--N", "3", "--p-max", "5", "--q", "1/2", "--a", "-1"]);
    let rows = csv_rows(&out);
    for row in rows.iter().filter(|r| r[0].parse::<usize>().unwrap() % 2 == 1) {
        assert_eq!(row[2], "0");
    }
}

#[test]
fn float_mode_matches_exact() {
    let exact = csv_rows(&qensemble(&["moments", "--N", "4", "--q", "2/3", "--a", "-1/2"]));
    let float = csv_rows(&qensemble(&["moments", "--N", "4", "--q", "2/3", "--a", "-0.5", "--mode", "float"]));
    for (e, f) in exact.iter().zip(&float) {
        let (num, den) = e[2].split_once('/').unwrap_or((&e[2], "1"));
        let value = num.parse::<f64>().unwrap() / den.parse::<f64>().unwrap();
        let got: f64 = f[2].parse().unwrap();
        assert!((got - value).abs() < 1e-12 * value.abs().max(1.0));
    }
}

#[test]
fn exit_codes() {
    let decimal = qensemble(&["moments", "--N", "2", "--q", "0.5", "--a", "-1/2"]);
    assert_eq!(decimal.status.code(), Some(2));
    let bad_q = qensemble(&["moments", "--N", "2", "--q", "3/2", "--a", "-1/2"]);
    assert_eq!(bad_q.status.code(), Some(2));
    let cap = qensemble(&["moments", "--N", "4", "--p-max", "8", "--q", "1/2", "--a", "-1/2", "--method", "matching"]);
    assert_eq!(cap.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&cap.stderr).contains("cap"));
    let raised = qensemble(&[
        "moments", "--N", "4", "--p-max", "8", "--q", "1/2", "--a", "-1/2", "--method", "matching",
        "--max-matching-vertices", "12",
    ]);
    assert!(raised.status.success());
    assert_eq!(qensemble(&["density", "--a", "0.5", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(qensemble(&["density", "--a", "-1/2", "--lambda", "1", "--grid", "1"]).status.code(), Some(2));
}

#[test]
fn density_regime_and_mass() {
    let out = qensemble(&["density", "--a", "-1/3", "--lambda", "log(2)", "--grid", "10000"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 10000);
    assert!(rows.iter().all(|r| r[2] == "SoftHardMixed"));
    let (x, rho) = (column(&rows, 0), column(&rows, 1));
    let mass: f64 = x.windows(2).zip(rho.windows(2)).map(|(x, r)| 0.5 * (x[1] - x[0]) * (r[0] + r[1])).sum();
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    assert_eq!(x[0], -1.0 / 3.0);
    assert_eq!(x[9999], 1.0);
}

#[test]
fn density_reflection() {
    let n = "401";
    let direct = csv_rows(&qensemble(&["density", "--a", "-3", "--lambda", "1", "--grid", n]));
    let folded = csv_rows(&qensemble(&["density", "--a", "-1/3", "--lambda", "1", "--grid", n]));
    let (x, rho) = (column(&direct, 0), column(&direct, 1));
    let (y, sigma) = (column(&folded, 0), column(&folded, 1));
    let m = x.len();
    for i in 0..m {
        let j = m - 1 - i;
        assert!((x[i] / -3.0 - y[j]).abs() < 1e-12);
        assert!((rho[i] - sigma[j] / 3.0).abs() < 1e-6, "x = {}", x[i]);
    }
}

#[test]
fn density_json_meta() {
    let out = qensemble(&["density", "--a", "-1/3", "--lambda", "log(10)", "--grid", "3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let meta = &doc["meta"];
    assert_eq!(meta["regime_thresholds"]["regime"], "TwoHardEdges");
    assert!((meta["regime_thresholds"]["lambda2"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-15);
    assert_eq!(meta["hard_edges"]["points"].as_array().unwrap().len(), 2);
    assert!(meta["tool_version"].is_string());
    assert_eq!(doc["rows"][2]["x"], 1.0);
}

#[test]
fn deterministic_output() {
    let args = ["density", "--a", "-0.7", "--lambda", "0.4", "--grid", "500"];
    assert_eq!(qensemble(&args).stdout, qensemble(&args).stdout);
    let z = ["zeros", "--N", "60", "--a", "-2", "--lambda", "1"];
    assert_eq!(qensemble(&z).stdout, qensemble(&z).stdout);
}

#[test]
fn single_zero() {
    let rows = csv_rows(&qensemble(&["zeros", "--N", "1", "--a", "-1/2", "--lambda", "1"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.5);
}

#[test]
fn zeros_table_columns() {
    let out = qensemble(&["zeros", "--N", "200", "--a", "-1/3", "--lambda", "log(2)", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[199]["empirical_cdf"], 1.0);
    let ks = doc["meta"]["ks_distance"].as_f64().unwrap();
    assert!(ks > 0.0 && ks < 0.02, "{ks}");
}

#[test]
fn residual_decay_table() {
    let rows = csv_rows(&qensemble(&["converge", "--p", "2", "--a", "-0.5", "--lambda", "1", "--N", "8,16,32"]));
    let scaled = column(&rows, 2);
    let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(lo > 0.0 && (hi - lo) / hi < 0.5, "{scaled:?}");
}

#[test]
fn output_file_and_threads() {
    let dir = std::env::temp_dir().join(format!("qensemble-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_qensemble"))
        .env("QENSEMBLE_THREADS", "2")
        .args(["moments", "--N", "2", "--q", "1/2", "--a", "-1/2", "--output", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("1,closed,3/4"));
    std::fs::remove_dir_all(&dir).unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_qensemble"))
        .env("QENSEMBLE_THREADS", "zero")
        .args(["moments", "--N", "2", "--q", "1/2", "--a", "-1/2"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn quick_verify_manifest() {
    let out = qensemble(&["verify", "--quick"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11, "{text}");
    let all_pass = lines.iter().all(|l| l.starts_with("PASS"));
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 3 }));
    if !all_pass {
        let first = lines.iter().find(|l| l.starts_with("FAIL")).unwrap();
        let id = first.split_whitespace().nth(1).unwrap();
        assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("{id} failed")));
    }
    for id in ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C11"] {
        let line = lines.iter().find(|l| l.split_whitespace().nth(1) == Some(id)).unwrap();
        assert!(line.starts_with("PASS"), "{line}");
    }
}
