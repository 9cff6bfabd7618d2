use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lp-homotopy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn constants_table_for_n4() {
    let o = run(&["constants", "--n", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Dimension n = 4"));
    assert!(text.contains("0.5774"));
    assert!(text.contains("2.0163"));
}

#[test]
fn constants_range_csv_and_json() {
    let o = run(&["constants", "--table", "gt06", "--n", "2..4", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,value\n2,6.2832\n3,12.5664\n4,19.7392\n");
    let o = run(&["constants", "--n", "3", "--p", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_array());
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(run(&["constants", "--n", "x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "poincare", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["pharmonic", "/definitely/missing"]).status.code(), Some(2));
}

#[test]
fn poincare_suite_passes_and_is_deterministic() {
    let args = ["--seed", "7", "verify", "poincare", "--count", "15"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("15/15"));
}

#[test]
fn bound_suite_same_seed_same_output() {
    let args = ["--seed", "11", "--samples", "2000", "verify", "bound", "--n", "2", "--k", "2", "--count", "5"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&run(&args)));
}

#[test]
fn out_writes_body_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("poincare.json");
    let o = run(&["--out", out.to_str().unwrap(), "verify", "poincare", "--count", "3"]);
    assert!(o.status.success());
    let body: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(body["suite"], "poincare");
    let manifest_path = dir.path().join("poincare.json.manifest.json");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    for key in ["command", "parameters", "seed", "samples", "t_steps", "versions", "wall_time_s", "checks"] {
        assert!(m.get(key).is_some(), "manifest lacks {key}");
    }
}

#[test]
fn transfer_check_on_scaling_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "map.txt", "dim: 2\ncomponent: 2*x1\ncomponent: 2*x2\n");
    let form = write(dir.path(), "form.txt", "1,2 : 1\n");
    let o = run(&["--samples", "2000", "transfer-check", "--map", &map, "--form", &form]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn pharmonic_on_area_form() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "area.txt", "1,2 : 1\n");
    let o = run(&["pharmonic", &form, "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // (−x₂dx₁ + x₁dx₂)/2 has energy π/8 on the unit disc
    let e = v["energy"].as_f64().unwrap();
    assert!((e - std::f64::consts::PI / 8.0).abs() < 1e-10, "{e}");
}

#[test]
fn il_compactness_csv() {
    let o = run(&["il-compactness", "--grid", "6", "--top", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,sigma");
    assert_eq!(lines.len(), 4);
}

#[test]
fn failed_check_exits_with_one() {
    let o = run(&["--samples", "500", "verify", "il", "--grid", "4", "--points", "4", "--max-residual", "1e-12"]);
    assert_eq!(o.status.code(), Some(1));
}
