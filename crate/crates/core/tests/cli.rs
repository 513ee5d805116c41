use std::process::{Command, Output};

fn latglue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latglue")).args(args).env_remove("LATGLUE_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Failing invocations print exactly one line starting with `code`.
fn assert_fails_with(o: &Output, code: &str) {
    assert!(!o.status.success());
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("{code}: ")), "{err}");
}

#[test]
fn catalog_lists_reference_values() {
    let o = latglue(&["catalog", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    let items = v["result"].as_array().unwrap();
    let find = |name: &str| items.iter().find(|i| i["name"] == name).unwrap().clone();
    assert_eq!(find("GluedE6E6")["nsm"]["exact"], "200359601790277/2859883842816000");
    assert!((find("E6")["det_gram"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    find("Zn");
}

#[test]
fn nsm_json_is_byte_identical_across_runs() {
    let args = ["nsm", "GluedD6D6", "--samples", "3000", "--seed", "7", "--streams", "3", "--format", "json"];
    let a = latglue(&args);
    let b = latglue(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // The worker count does not change results.
    let c = Command::new(env!("CARGO_BIN_EXE_latglue")).args(args).env("LATGLUE_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["samples"], 3000);
    assert_eq!(v["result"]["seed"], 7);
}

#[test]
fn nsm_of_the_interval() {
    let o = latglue(&["nsm", "Z1", "--fast", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let g = v["result"]["g_hat"].as_f64().unwrap();
    let s = v["result"]["sigma_hat"].as_f64().unwrap();
    assert_eq!(v["result"]["samples"], 100_000);
    assert!((g - 1.0 / 12.0).abs() < 4.0 * s);
}

#[test]
fn survey_smoke_mode() {
    let args = ["glue-survey", "D6xD6", "--samples", "10", "--format", "json"];
    let a = latglue(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert_eq!(v["result"]["counts"]["groups"], 67);
    assert_eq!(v["result"]["counts"]["inequivalent"], 22);
    assert!(rows.iter().all(|r| r["seed"].is_u64() && r["estimate"]["sigma_hat"].as_f64().unwrap() > 1e-4));
    assert!(stderr(&a).contains("wall time"));
    assert_eq!(a.stdout, latglue(&args).stdout);

    let csv = latglue(&["glue-survey", "E6xE6", "--samples", "10", "--format", "csv"]);
    assert_eq!(stdout(&csv).lines().count(), 7);
}

#[test]
fn geometry_of_z3() {
    let o = latglue(&["geometry", "Z3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["relevant_count"], 6);
    assert_eq!(v["result"]["kissing"], 6);
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("glued.txt");
    let p = path.to_str().unwrap();
    let o = latglue(&["export", "GluedE6E6", "--output", p]);
    assert!(o.status.success());
    let back = lattice_glue::io::read_lattice(&path).unwrap();
    let diff = back.gram().max_abs_diff(lattice_glue::catalog::glued_e6e6().gram());
    assert!(diff < 1e-12);

    let o = latglue(&["import", p, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["dimension"], 12);
    assert_eq!(v["result"]["kissing"], 144);

    // A file path works wherever a lattice name does.
    assert!(latglue(&["nsm", p, "--samples", "100"]).status.success());
}

#[test]
fn errors_are_single_coded_lines() {
    assert_fails_with(&latglue(&["nsm", "Q7"]), "UNKNOWN_LATTICE");
    assert_fails_with(&latglue(&["glue-survey", "E8xE8", "--samples", "10"]), "UNKNOWN_LATTICE");
    assert_fails_with(&latglue(&["nsm", "E6", "--samples", "0"]), "INVALID_ARGUMENT");
    assert_fails_with(&latglue(&["frobnicate"]), "INVALID_ARGUMENT");
    assert_fails_with(&latglue(&["geometry", "Z17"]), "DIMENSION_TOO_LARGE");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "2 2\n1 0\n0 oops\n").unwrap();
    let o = latglue(&["import", bad.to_str().unwrap()]);
    assert_fails_with(&o, "PARSE_ERROR");
    assert!(stderr(&o).contains("line 3"));

    let flat = dir.path().join("flat.txt");
    std::fs::write(&flat, "2 2\n1 1\n2 2\n").unwrap();
    assert_fails_with(&latglue(&["import", flat.to_str().unwrap()]), "RANK_DEFICIENT");

    let o = Command::new(env!("CARGO_BIN_EXE_latglue"))
        .args(["nsm", "E6", "--samples", "10"])
        .env("LATGLUE_THREADS", "zero")
        .output()
        .unwrap();
    assert_fails_with(&o, "INVALID_ARGUMENT");
}
