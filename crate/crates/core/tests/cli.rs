//! End-to-end runs of the `mbtrap` command line through `cli::run`.

use mbtrap::cli::{run, EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE};
use serde_json::Value;
use std::ffi::OsString;
use std::path::Path;
use tempfile::TempDir;

/// Runs `mbtrap <args> --out <dir>/<name>` and returns the exit code and the
/// written text (empty if nothing was written).
fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let path = dir.join(name);
    let mut argv: Vec<OsString> = vec!["mbtrap".into()];
    argv.extend(args.iter().map(OsString::from));
    argv.push("--out".into());
    argv.push(path.clone().into_os_string());
    let code = run(argv);
    (code, std::fs::read_to_string(&path).unwrap_or_default())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_str().expect("numbers are strings").parse().unwrap()
}

fn schema() -> jsonschema::Validator {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/mbtrap-output.schema.json")).unwrap();
    jsonschema::validator_for(&json(&text)).expect("schema compiles")
}

fn assert_valid(doc: &Value) {
    let errors: Vec<String> = schema().iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

#[test]
fn no_interaction_gives_oscillator_energy() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "e.json", &["energies", "--xi", "0"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    assert_valid(&doc);
    assert_eq!(num(&doc["total_energy"]), 4.5);
    assert_eq!(num(&doc["interaction_energy"]), 0.0);
}

#[test]
fn reference_frequency_keeps_only_first_order() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "e.json", &["energies", "--omega-ratio", "1", "--xi", "0.05"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    let c21 = num(&doc["coefficients"]["c2_1"]);
    assert_eq!(num(&doc["u2"]["total"]), c21 * 0.05);
    assert_eq!(num(&doc["u2"]["second"]), 0.0);
}

#[test]
fn total_energy_is_composed_from_the_u() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "e.json", &["energies", "--xi", "0.05", "--N", "4"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    assert_valid(&doc);
    let (u2, u3, u4) = (num(&doc["u2"]["total"]), num(&doc["u3"]["total"]), num(&doc["u4"]["total"]));
    let want = 6.0 + 6.0 * u2 + 4.0 * u3 + u4;
    assert!((num(&doc["total_energy"]) - want).abs() < 1e-14);
    assert!(doc["counterterm"].is_null());
    assert!(doc["physical"].is_null());
}

#[test]
fn rubidium_preset_reports_frequencies() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "e.json", &["energies", "--rubidium87", "--trap-hz", "5000"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    assert_valid(&doc);
    assert_eq!(num(&doc["physical"]["trap_hz"]), 5000.0);
    assert_eq!(doc["inputs"]["preset"], "rubidium87");
}

#[test]
fn csv_energies_and_precision() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "e.csv", &["--format", "csv", "--precision", "5", "energies", "--xi", "0.05"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("quantity,value\n"));
    assert!(out.contains("u2.first,3.9894e-2\n"), "{out}");
}

#[test]
fn usage_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["energies", "--no-such-flag"],
        &["energies", "--rubidium87", "--xi", "0.1"],
        &["energies", "--trap-hz", "100"],
        &["--precision", "18", "energies"],
        &["scatter", "--a-grid", "1:2"],
        &["scan-fig1", "--grid", "0.1", "--points", "3"],
        &["frobnicate"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let (code, _) = run_to(dir.path(), &format!("u{i}"), args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(["mbtrap", "--version"].map(OsString::from)), EXIT_OK);
    assert_eq!(run(["mbtrap", "energies", "--help"].map(OsString::from)), EXIT_OK);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["energies", "--xi", "0.07", "--omega-ratio", "3", "--N", "5"][..],
        &["scatter", "--a-grid", "-0.02:0.02:9"][..],
        &["scan-fig1", "--points", "20"][..],
        &["prefactors"][..],
    ] {
        let (c1, a) = run_to(dir.path(), "a", args);
        let (c2, b) = run_to(dir.path(), "b", args);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn scan_starts_with_a_zero_row() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "s.csv", &["scan-fig1", "--w-max", "0.01", "--points", "4"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "omega_over_omegas,U2t_1,U2t_23,U3t_2,U3t_23,U4t_3,U2exact_minus_U2t1");
    let zero: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(zero, vec![0.0; 7]);
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 0.01);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn scan_json_validates() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "s.json", &["--format", "json", "scan-fig1", "--grid", "0.001,0.004"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    assert_valid(&doc);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn scatter_rows() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "s.json", &["--format", "json", "scatter", "--a-grid", "-0.01,0,0.01,0.05"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    assert_valid(&doc);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows[1]["V0"], "0");
    assert_eq!(rows[1]["r_eff"], "NaN");
    assert_eq!(rows[1]["status"], "ok");
    for row in [&rows[0], &rows[2]] {
        assert_eq!(row["status"], "ok");
        assert!((num(&row["a0"]) - num(&row["a_target"])).abs() < 1e-4 * 0.01);
    }
    assert!(num(&rows[0]["V0"]) < 0.0 && num(&rows[2]["V0"]) > 0.0);
    // a = 5 r0 is beyond what a repulsive Gaussian of bounded strength reaches.
    assert_ne!(rows[3]["status"], "ok");
}

#[test]
fn table1_with_stored_alpha33_passes() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "t.json", &["--format", "json", "table1"]);
    assert_eq!(code, EXIT_OK);
    let doc = json(&out);
    assert_valid(&doc);
    assert_eq!(doc["alpha3_3_source"], "stored");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn prefactors_validate() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "p.json", &["prefactors"]);
    assert_eq!(code, EXIT_OK);
    assert_valid(&json(&out));
}

#[test]
fn small_alpha33_grid_misses_the_reference_and_exits_2() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(dir.path(), "t.json", &["--format", "json", "table2", "--cutoff-max", "400"]);
    assert_eq!(code, EXIT_TOLERANCE);
    let doc = json(&out);
    assert_valid(&doc);
    assert_eq!(doc["pass"], false);
    let rows = doc["rows"].as_array().unwrap();
    let failed: Vec<&str> =
        rows.iter().filter(|r| r["status"] == "FAIL").map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["alpha3_3"]);
}
