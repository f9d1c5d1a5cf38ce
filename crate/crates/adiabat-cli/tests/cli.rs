//! End-to-end checks of the binary: exit codes, JSON shapes, file formats.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adiabat"))
}

fn write_state(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("adiabat-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn entropy_reports_qubit_values() {
    let state = write_state("qubit.json", r#"{"spectrum": [0.75, 0.25]}"#);
    let out = run(&["entropy", "--state", state.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert!((v["h_min"].as_f64().unwrap() - 0.4150374992788438).abs() < 1e-11);
    assert!((v["h"].as_f64().unwrap() - 0.8112781244591328).abs() < 1e-11);
    assert_eq!(v["h_max"].as_f64().unwrap(), 1.0);
    assert!(v.get("f").is_none());
}

#[test]
fn entropy_with_heat_reservoir_adds_free_energies() {
    let state = write_state(
        "thermal.json",
        r#"{"spectrum": [0.9, 0.1], "energies": [0.0, 1.0]}"#,
    );
    let out = run(&["entropy", "--state", state.to_str().unwrap(), "--beta", "1"]);
    let v = stdout_json(&out);
    assert!((v["f_max"].as_f64().unwrap() - 0.9_f64.ln()).abs() < 1e-11);
    let f_min_expect = -(1.0 + (-1.0_f64).exp()).ln();
    assert!((v["f_min"].as_f64().unwrap() - f_min_expect).abs() < 1e-11);
}

#[test]
fn entropy_custom_renyi_orders() {
    let state = write_state("orders.json", r#"{"spectrum": [0.75, 0.25]}"#);
    let out = run(&[
        "entropy",
        "--state",
        state.to_str().unwrap(),
        "--alpha",
        "0.3,inf",
    ]);
    let v = stdout_json(&out);
    let renyi = v["renyi"].as_object().unwrap();
    assert_eq!(renyi.len(), 2);
    assert!((renyi["inf"].as_f64().unwrap() - 0.4150374992788438).abs() < 1e-11);
    let out = run(&[
        "entropy",
        "--state",
        state.to_str().unwrap(),
        "--alpha",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2), "negative order is a usage error");
}

#[test]
fn entropy_beta_without_energies_is_a_domain_error() {
    let state = write_state("bare.json", r#"{"spectrum": [0.9, 0.1]}"#);
    let out = run(&["entropy", "--state", state.to_str().unwrap(), "--beta", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "MissingLabels");
}

#[test]
fn order_reports_both_directions_and_class() {
    let pure = write_state("pure.json", r#"{"spectrum": [1.0, 0.0]}"#);
    let mixed = write_state("mixed.json", r#"{"spectrum": [0.5, 0.5]}"#);
    let out = run(&[
        "order",
        "--relation",
        "m",
        "--from",
        pure.to_str().unwrap(),
        "--to",
        mixed.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["precedes"], true);
    assert_eq!(v["reverse"], false);
    assert_eq!(v["class"], "ABeforeB");
}

#[test]
fn order_thermal_needs_beta() {
    let a = write_state("a.json", r#"{"spectrum": [0.9, 0.1], "energies": [0.0, 1.0]}"#);
    let out = run(&[
        "order",
        "--relation",
        "t",
        "--from",
        a.to_str().unwrap(),
        "--to",
        a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "missing --beta is a usage error");
}

#[test]
fn ly_matches_the_qubit_anchor() {
    let state = write_state("anchor.json", r#"{"spectrum": [0.75, 0.25]}"#);
    let out = run(&[
        "ly",
        "--state",
        state.to_str().unwrap(),
        "--relation",
        "m",
        "--gauge",
        "1,2",
        "--which",
        "minus",
    ]);
    let v = stdout_json(&out);
    let expect = (4.0_f64 / 3.0).log2();
    assert!((v["lambda_star"].as_f64().unwrap() - expect).abs() < 1e-9);
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = run(&[
        "verify", "--relation", "t", "--trials", "40", "--seed", "9", "--dim-max", "8",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn witness_round_trips_and_rejects_reverse() {
    let pure = write_state("wp.json", r#"{"spectrum": [1.0, 0.0]}"#);
    let mixed = write_state("wm.json", r#"{"spectrum": [0.5, 0.5]}"#);
    let out = run(&[
        "witness",
        "--from",
        pure.to_str().unwrap(),
        "--to",
        mixed.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["product"][0][0].as_f64().unwrap(), 0.5);

    let out = run(&[
        "witness",
        "--from",
        mixed.to_str().unwrap(),
        "--to",
        pure.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "NotMajorized");
}

#[test]
fn axioms_emit_table_and_json_and_exit_zero() {
    let out = run(&[
        "axioms", "--relation", "m", "--trials", "30", "--seed", "4", "--dim-max", "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // Default output is the JSON report; --output table adds the table.
    let v: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(v["violations"], 0);
    let out = run(&[
        "axioms", "--relation", "m", "--trials", "10", "--output", "table",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("reflexivity"));
    assert!(text.contains("cancellation"));
}

#[test]
fn lorenz_csv_has_header_and_breakpoints() {
    let state = write_state("lz.json", r#"{"spectrum": [0.75, 0.25]}"#);
    let out = run(&[
        "lorenz",
        "--state",
        state.to_str().unwrap(),
        "--output",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,L");
    assert_eq!(lines.len(), 4); // header + origin + two breakpoints
    assert!(!text.contains('\r'));
    let last: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last, vec![2.0, 1.0]);
}

#[test]
fn matrix_input_is_diagonalized() {
    let state = write_state(
        "plusstate.json",
        r#"{"matrix": {"re": [[0.5, 0.5], [0.5, 0.5]]}}"#,
    );
    let out = run(&["entropy", "--state", state.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["h"].as_f64().unwrap(), 0.0);
    assert_eq!(v["h_max"].as_f64().unwrap(), 0.0); // rank 1 projector
}

#[test]
fn matrix_with_labels_decoheres_sector_wise() {
    // Coherence between the two E = 0 levels survives; the cross-energy
    // coherences are projected out. Sector eigenvalues: (0.45, 0.15), plus
    // the E = 1 diagonal 0.4.
    let state = write_state(
        "sectors.json",
        r#"{
            "matrix": {"re": [[0.3, 0.15, 0.2], [0.15, 0.3, 0.1], [0.2, 0.1, 0.4]]},
            "energies": [0.0, 0.0, 1.0]
        }"#,
    );
    let out = run(&[
        "entropy",
        "--state",
        state.to_str().unwrap(),
        "--beta",
        "1",
    ]);
    let v = stdout_json(&out);
    // Spectrum should be (0.45, 0.4, 0.15): h = -sum p log2 p.
    let expect = -(0.45_f64 * 0.45_f64.log2() + 0.4 * 0.4_f64.log2() + 0.15 * 0.15_f64.log2());
    assert!(
        (v["h"].as_f64().unwrap() - expect).abs() < 1e-10,
        "h = {}",
        v["h"]
    );
}

#[test]
fn output_is_reproducible_and_json_round_trips() {
    let state = write_state(
        "rt.json",
        r#"{"spectrum": [0.37, 0.33, 0.2, 0.1], "energies": [0.1, 0.9, 0.4, 0.2]}"#,
    );
    let args = [
        "entropy",
        "--state",
        state.to_str().unwrap(),
        "--beta",
        "2.5",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "same argv, same bytes");

    // Rewriting the input through the emitted 12-digit format changes nothing.
    let v = stdout_json(&first);
    let h = v["h"].as_f64().unwrap();
    let reparsed: f64 = format!("{h:.11e}").parse().unwrap();
    assert_eq!(format!("{reparsed:.11e}"), format!("{h:.11e}"));
}

#[test]
fn rejects_unknown_fields_in_state_files() {
    let state = write_state("junk.json", r#"{"spectrum": [1.0], "unknown": 3}"#);
    let out = run(&["entropy", "--state", state.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "parse");
}
