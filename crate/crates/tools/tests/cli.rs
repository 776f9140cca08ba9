//! Runs the `scarmps` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn scarmps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scarmps")).args(args).output().expect("binary runs")
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn field(header: &[String], row: &[String], name: &str) -> String {
    row[header.iter().position(|h| h == name).unwrap()].clone()
}

fn number(header: &[String], row: &[String], name: &str) -> f64 {
    field(header, row, name).parse().unwrap()
}

#[test]
fn observables_columns_and_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("obs.csv");
    let plot = dir.path().join("obs.svg");
    let run = scarmps(&["observables", "--model", "ghz", "-L", "12", "--steps", "21", "--out", out.to_str().unwrap(), "--plot", plot.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(&header[..3], ["g", "sigmax_closed", "sigmax_finite_L"]);
    assert_eq!(rows.len(), 21);
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("<svg"));

    let run = scarmps(&["observables", "--g", "-0.5", "-L", "12", "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!(number(&header, &rows[0], "sigmax_finite_L").abs() < 0.05);

    let run = scarmps(&["observables", "--steps", "1", "--g-min", "0.2", "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    assert_eq!(csv_rows(&out).1.len(), 1);

    // long layout: the thermodynamic value is absent only at the transition
    let run = scarmps(&["observables", "--long", "--steps", "3", "--g-min", "-0.5", "--g-max", "0.5", "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["g", "observable_name", "L", "value_re", "value_im"]);
    assert_eq!(rows.len(), 4 + 3 + 4);
    let thermo: Vec<_> = rows.iter().filter(|r| r[1] == "sigmax_thermodynamic").collect();
    assert_eq!(thermo.len(), 2);
    assert!(number(&header, thermo[0], "value_re").abs() < 1e-10);
    assert!((number(&header, thermo[1], "value_re") - 4.0 * 0.5 / 2.25).abs() < 1e-10);
}

#[test]
fn spectrum_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    let o = out.to_str().unwrap();

    let run = scarmps(&["spectrum", "-L", "4", "--g", "0.5", "--out", o]);
    assert!(run.status.success());
    assert_eq!(csv_rows(&out).1.len(), 6);

    let run = scarmps(&["spectrum", "-L", "12", "--g", "0.5", "--out", o]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&out);
    let scars: Vec<_> = rows.iter().filter(|r| field(&header, r, "is_scar") == "true").collect();
    assert_eq!(scars.len(), 1);
    assert!(number(&header, scars[0], "energy").abs() < 1e-9);
    assert!(number(&header, scars[0], "entropy") < 0.5 * number(&header, scars[0], "page_entropy"));

    let run = scarmps(&["spectrum", "-L", "12", "--g", "0.5", "--embedding", "ground", "--out", o]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&out);
    assert!(rows.iter().all(|r| number(&header, r, "energy") >= -1e-10));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["spectrum", "-L", "8"][..],
        &["spectrum", "-L", "7", "--g", "0.1"],
        &["sweep", "--a", "0"],
        &["sweep", "--g-min", "0.5", "--g-max", "0.1"],
        &["observables", "--model", "heisenberg"],
        &["frobnicate"],
    ] {
        let run = scarmps(args);
        assert_eq!(run.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&run.stderr));
    }
}

#[test]
fn io_failures_exit_with_three() {
    let run = scarmps(&["observables", "--steps", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains("/nonexistent-dir/x.csv"));
    let run = scarmps(&["observables", "--config", "/nonexistent-dir/run.cfg"]);
    assert_eq!(run.status.code(), Some(3));
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let run = scarmps(&["verify"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    let run = scarmps(&["verify", "--inject-non-hermitian"]);
    assert_eq!(run.status.code(), Some(1));
    let report = String::from_utf8_lossy(&run.stdout);
    assert!(report.lines().any(|l| l.starts_with("FAIL hermiticity")));
    let run = scarmps(&["verify", "--model", "z2"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("procrustes"));
}

#[test]
fn sweep_outputs_are_byte_stable_and_cache_reusable() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let base = ["sweep", "--model", "z2", "-L", "8", "--g-min", "-0.4", "--g-max", "0.4", "--steps", "5"];
    let with = |extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        scarmps(&args)
    };
    let (a, b, c, cache, summary) = (path("a.csv"), path("b.csv"), path("c.csv"), path("chain.json"), path("s.csv"));
    assert!(with(&["--out", &a, "--workers", "1", "--summary", &summary]).status.success());
    assert!(with(&["--out", &b, "--workers", "3", "--chain-cache", &cache]).status.success());
    assert!(Path::new(&cache).exists());
    assert!(with(&["--out", &c, "--chain-cache", &cache]).status.success());
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(bytes, std::fs::read(&c).unwrap());
    assert!(!bytes.contains(&b'\r'));
    assert_eq!(csv_rows(Path::new(&summary)).1.len(), 5);

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    let states = &doc["points"][0]["basis"]["states"];
    assert_eq!(states.as_array().unwrap().len(), 8);
    assert_eq!(states[0].as_array().unwrap().len(), 4);
    assert_eq!(states[0][0].as_array().unwrap().len(), 2);

    // a cache for another grid is rejected rather than silently reused
    let run = scarmps(&["sweep", "--model", "z2", "-L", "8", "--steps", "3", "--chain-cache", &cache]);
    assert_eq!(run.status.code(), Some(3));
}

#[test]
fn json_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "model = ghz\nembedding = ground\nL = 6\ng = 0.25\nformat = json\n").unwrap();
    let out = dir.path().join("spec.json");
    let run = scarmps(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[0]["L"], 6);
    assert_eq!(rows[0]["is_scar"], true);
}

#[test]
fn perturbation_and_dense_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let run = scarmps(&["perturb", "-L", "8", "--g", "0.5", "--kind", "within", "--epsilon", "0,0.3", "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert!(number(&header, r, "max_overlap") > 1.0 - 1e-10);
    }

    let dump = dir.path().join("h.bin");
    let run = scarmps(&["spectrum", "-L", "6", "--g", "0.5", "--dump-dense", dump.to_str().unwrap()]);
    assert!(run.status.success());
    assert_eq!(std::fs::metadata(&dump).unwrap().len(), 64 * 64 * 16);
}
