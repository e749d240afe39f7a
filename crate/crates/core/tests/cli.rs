use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fuelpath::techdata::DEFAULT_DATASET_JSON;
use serde_json::{json, Value};

fn fuelpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuelpath"))
        .args(args)
        .env_remove("FUELPATH_DATASET")
        .output()
        .expect("binary runs")
}

fn write_dataset(dir: &Path, doc: &Value) -> String {
    let path = dir.join("dataset.json");
    fs::write(&path, doc.to_string()).unwrap();
    path.display().to_string()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for format in ["csv", "json"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for dir in [&a, &b] {
            for cmd in ["lcof", "sweep", "lscm"] {
                let out = fuelpath(&[cmd, "--out", dir.path().to_str().unwrap(), "--format", format]);
                assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
            }
        }
        let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
        assert_eq!(sa.len(), 10);
        assert_eq!(sa, sb);
    }
}

#[test]
fn expected_files_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for cmd in ["lcof", "sweep", "lscm"] {
        assert!(fuelpath(&[cmd, "--out", out]).status.success());
    }
    let names: Vec<String> = snapshot(dir.path()).into_iter().map(|(n, _)| n).collect();
    for want in [
        "h2_lcof.csv",
        "slf_lcof.csv",
        "sweep_45z.csv",
        "frontier_0.75_1.25.csv",
        "frontier_0.75_2.25.csv",
        "frontier_1.5_2.csv",
        "frontier_1.5_3.csv",
        "lscm.csv",
    ] {
        assert!(names.iter().any(|n| n == want), "missing {want}");
    }
    let h2 = fs::read_to_string(dir.path().join("h2_lcof.csv")).unwrap();
    assert!(h2.lines().next().unwrap().ends_with("ci_kgco2e_per_kg"));
    assert!(h2.contains("\nP4,"));
    assert_eq!(h2.lines().count(), 7);
    let lscm = fs::read_to_string(dir.path().join("lscm.csv")).unwrap();
    assert!(lscm.contains("\nP1,N/A"));
    assert!(lscm.contains("\nP14,N/A"));
    // Four decimals everywhere a number appears.
    for line in h2.lines().skip(1) {
        for cell in line.split(',').skip(1) {
            assert_eq!(cell.split('.').nth(1).map(str::len), Some(4), "{cell}");
        }
    }
}

#[test]
fn overrides_change_the_fuel_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(fuelpath(&["lcof", "--out", out, "--z45-years", "5", "--lcfs", "100", "--rin-d5", "0.75", "--rin-d3", "1.25"]).status.success());
    let slf = fs::read_to_string(dir.path().join("slf_lcof.csv")).unwrap();
    let p13 = slf.lines().find(|l| l.starts_with("P13,")).unwrap();
    let net: f64 = p13.split(',').rev().nth(1).unwrap().parse().unwrap();
    assert!(net < 3.5875, "{net}");
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["lcof", "--z45-years", "16", "--out", out],
        vec!["lcof", "--lcfs", "-5", "--out", out],
        vec!["sweep", "--fossil-price", "0", "--out", out],
        vec!["lcof", "--dataset", "/nonexistent/dataset.json", "--out", out],
    ] {
        let o = fuelpath(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn missing_policy_block_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(DEFAULT_DATASET_JSON).unwrap();
    doc.as_object_mut().unwrap().remove("policy");
    let path = write_dataset(dir.path(), &doc);
    let o = fuelpath(&["lcof", "--dataset", &path, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("schema error at `policy`"), "{err}");
}

#[test]
fn dataset_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(DEFAULT_DATASET_JSON).unwrap();
    doc["feedstocks"][0]["price"] = json!({ "value": 8.0, "unit": "USD/GJ_HHV" });
    let path = write_dataset(dir.path(), &doc);
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_fuelpath"))
        .args(["lcof", "--out", out.to_str().unwrap()])
        .env("FUELPATH_DATASET", &path)
        .output()
        .unwrap();
    assert!(o.status.success());
    let h2 = fs::read_to_string(out.join("h2_lcof.csv")).unwrap();
    assert!(!h2.contains("\nP1,0.3768,0.1007,0.0511,0.7510,"));
}

#[test]
fn verify_prints_a_table_and_flags_failures() {
    let o = fuelpath(&["verify"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().any(|l| l.contains("P1 LCOF $/kg") && l.ends_with("PASS")));
    let expected = if text.contains("FAIL") { Some(2) } else { Some(0) };
    assert_eq!(o.status.code(), expected);
}

#[test]
fn verify_catches_a_perturbed_reference_row() {
    // A 10% SMR CAPEX change moves P1 by about 0.04 $/kg, inside the 0.07
    // tolerance, so the check is exercised with a 25% change.
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(DEFAULT_DATASET_JSON).unwrap();
    let capex = doc["technologies"][0]["capex"]["value"].as_f64().unwrap();
    assert_eq!(doc["technologies"][0]["id"], "smr");
    doc["technologies"][0]["capex"]["value"] = json!(capex * 1.25);
    let path = write_dataset(dir.path(), &doc);
    let o = fuelpath(&["verify", "--dataset", &path]);
    assert_eq!(o.status.code(), Some(2));
    let text = String::from_utf8_lossy(&o.stdout);
    let line = text.lines().find(|l| l.contains("P1 LCOF $/kg")).unwrap();
    assert!(line.ends_with("FAIL"), "{line}");
}
