use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_u1cs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("u1cs-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const M26: &str = "3\n-3 1 1\n1 3 1\n1 1 -1\n";

#[test]
fn verify_m26_levels_one_to_eight() {
    let path = fixture("m26.lnk", M26);
    let o = run(&["verify", "--k", "1..8", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    for (i, line) in lines.iter().enumerate() {
        assert!(line.starts_with(&format!("[PASS] k = {}:", i + 1)), "{line}");
        assert!(line.contains("sqrt(12)"), "{line}");
    }
}

#[test]
fn sphere_has_trivial_torsion() {
    let path = fixture("sphere.lnk", "1\n1\n");
    let o = run(&["homology", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trivial torsion, p = 1"));
}

#[test]
fn lens_two_at_level_two() {
    let path = fixture("lens2.lnk", "1\n2\n");
    let o = run(&["zk", "--k", "2", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Z_2 = 2 + 0i (exact)\n"), "{}", stdout(&o));
}

#[test]
fn verify_json_schema() {
    let o = run(&["--format", "json", "verify", "--k", "1..3", "--catalog", "m26"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 3);
    let r = &reports[0];
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["name", "m", "det", "signature", "torsion", "k", "z_k", "i_k", "sqrt_p", "residual", "tolerance", "pass"]
    );
    assert_eq!(r["det"], 12);
    assert_eq!(r["signature"], -1);
    assert_eq!(r["torsion"], serde_json::json!([2, 6]));
    assert_eq!(r["k"], 1);
    assert_eq!(r["z_k"]["exact_zero"], true);
    assert_eq!(r["sqrt_p"].as_f64().unwrap(), 12f64.sqrt());
    let phases = r["z_k"]["phases"].as_array().unwrap();
    let total: i64 = phases.iter().map(|p| p["mult"].as_i64().unwrap()).sum();
    assert_eq!(total, 12);
    for p in phases {
        assert!(p["num"].is_u64() && p["den"].is_u64());
    }
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn json_floats_round_trip() {
    let o = run(&["--format", "json", "verify", "--k", "2", "--catalog", "m26"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    let re_text = v["i_k"]["im"].to_string();
    let parsed: f64 = re_text.parse().unwrap();
    assert_eq!(parsed.to_string().parse::<f64>().unwrap(), parsed);
    assert_eq!(serde_json::to_string(&v).unwrap(), text.trim());
}

#[test]
fn homology_json_uses_exact_fractions() {
    let o = run(&["--format", "json", "homology", "--catalog", "lens:2+lens:3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["torsion"], serde_json::json!([6]));
    assert_eq!(v["p"], 6);
    let q = v["linking_form"][0][0].as_str().unwrap();
    let (num, den) = q.split_once('/').unwrap();
    assert_eq!(den, "6");
    assert!(["1", "5"].contains(&num), "{q}");
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "verify", "--k", "1..4", "--catalog", "m26+lens:3", "--workers", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let serial = run(&["--format", "json", "verify", "--k", "1..4", "--catalog", "m26+lens:3"]);
    assert_eq!(a.stdout, serial.stdout);
}

#[test]
fn catalog_round_trips_through_files() {
    let o = run(&["catalog", "m26"]);
    assert_eq!(stdout(&o), "# name: M_{2,6}\n3\n-3 1 1\n1 3 1\n1 1 -1\n");
    let path = fixture("from_catalog.lnk", &stdout(&o));
    let h = run(&["homology", path.to_str().unwrap()]);
    assert!(stdout(&h).contains("Z_2 + Z_6, p = 12"), "{}", stdout(&h));

    let o = run(&["--format", "json", "catalog", "lens:5"]);
    let path = fixture("lens5.json", &stdout(&o));
    let h = run(&["homology", path.to_str().unwrap()]);
    assert!(stdout(&h).contains("name: L(5,1)"));
    assert!(stdout(&h).contains("Z_5, p = 5"));
}

#[test]
fn reads_standard_input() {
    let mut child = bin()
        .args(["zk", "--k", "1", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{\"linking_matrix\": [[2]]}").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exactly zero"));
}

#[test]
fn reciprocity_reports_both_sides() {
    let o = run(&["--format", "json", "reciprocity", "--a", "-1", "--b", "0", "--c", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["agree"], true);
    assert!((v["lhs"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["rhs"]["im"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let bad = run(&["reciprocity", "--a", "1", "--b", "0", "--c", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("E_PRECONDITION"));
}

#[test]
fn exit_codes_and_diagnostics() {
    let garbage = fixture("garbage.lnk", "2\n1 x\n0 1\n");
    let o = run(&["homology", garbage.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E_PARSE") && stderr(&o).contains("line 2, column 3"));

    let asym = fixture("asym.lnk", "2\n1 2\n3 1\n");
    assert_eq!(run(&["homology", asym.to_str().unwrap()]).status.code(), Some(2));

    let free = fixture("free.lnk", "2\n1 1\n1 1\n");
    let o = run(&["homology", free.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E_FREE_HOMOLOGY"));

    let o = run(&["verify", "--k", "2", "--tol", "0", "--catalog", "m26"]);
    assert_eq!(o.status.code(), Some(1), "residual is nonzero, zero tolerance must fail");
    assert!(stdout(&o).contains("[FAIL]"));

    let o = run(&["rt", "--k", "8", "--budget", "100", "--catalog", "m26"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E_BUDGET") && stderr(&o).contains("4096"));

    assert_eq!(run(&["zk", "--catalog", "m26"]).status.code(), Some(2));
    assert_eq!(run(&["zk", "--k", "0", "--catalog", "m26"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "/nonexistent/file.lnk"]).status.code(), Some(2));
    assert_eq!(run(&["homology"]).status.code(), Some(2));
}
