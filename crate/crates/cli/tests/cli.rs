//! End-to-end tests of the `qroof` binary: document parsing, JSON output,
//! sweep tables, exit codes, and determinism.

use serde_json::Value;
use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qroof"))
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write spec file");
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn qroof")
}

/// Runs the binary, asserts success, and parses the stdout JSON document.
fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "qroof {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

fn num(doc: &Value, key: &str) -> f64 {
    doc[key].as_f64().unwrap_or_else(|| panic!("missing numeric field {key}: {doc}"))
}

#[test]
fn concurrence_amplitude_damping_center() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.5}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.0, 0.0, 0.0]}"#);
    let doc = run_json(&[
        "concurrence",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    // C = 2·√(p(1−p))·ρ₁₁ = 2·(1/2)·(1/2) = 1/2 at the maximally mixed state.
    assert!((num(&doc, "concurrence") - 0.5).abs() < 1e-12);
    assert!((num(&doc, "concurrence_theta") - 0.5).abs() < 1e-10);
    assert_eq!(doc["method"], "named-closed-form");
    assert_eq!(doc["channel_kind"], "amplitude_damping");
}

#[test]
fn entanglement_vanishes_for_pure_phase_damping() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "phase_damping", "z": [0.0, 0.0]}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.0, 0.0, 0.0]}"#);
    let doc = run_json(&[
        "entanglement",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    // Phase damping: C = √((1−|z|²)(x₁²+x₂²)) = 0 on the x₃ axis.
    assert!(num(&doc, "E").abs() < 1e-12);
    assert_eq!(doc["unit"], "nats");
}

#[test]
fn entropy_splits_output_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.3}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.2, -0.1, 0.4]}"#);
    let doc = run_json(&[
        "entropy",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    let (h, e, s) = (num(&doc, "H"), num(&doc, "E"), num(&doc, "S_output"));
    assert!((h + e - s).abs() < 1e-12, "H + E must reassemble S(T(ρ))");
    assert!(h >= 0.0 && e >= 0.0);
}

#[test]
fn chi_of_orthogonal_pair_is_ln2_and_shrinks_through_damping() {
    let dir = tempfile::tempdir().unwrap();
    let ens = write_file(
        dir.path(),
        "ens.json",
        r#"{"members": [
            {"weight": 0.5, "state": {"bloch": [0.0, 0.0, 1.0]}},
            {"weight": 0.5, "state": {"bloch": [0.0, 0.0, -1.0]}}
        ]}"#,
    );
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.5}"#);

    let plain = run_json(&["chi", "--ensemble", ens.to_str().unwrap()]);
    assert!((num(&plain, "chi") - LN_2).abs() < 1e-12);
    assert_eq!(plain["channel_kind"], "identity");

    let damped = run_json(&[
        "chi",
        "--ensemble",
        ens.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    // S(diag(3/4, 1/4)) − ½·S(diag(1/2, 1/2)) for this ensemble.
    let expected = 0.75f64.mul_add(-(0.75f64.ln()), -(0.25 * 0.25f64.ln())) - 0.5 * LN_2;
    assert!((num(&damped, "chi") - expected).abs() < 1e-12);

    let bits = run_json(&[
        "chi",
        "--ensemble",
        ens.to_str().unwrap(),
        "--bits",
    ]);
    assert!((num(&bits, "chi") - 1.0).abs() < 1e-12);
    assert_eq!(bits["unit"], "bits");
}

#[test]
fn capacity_of_noiseless_limit_is_one_bit() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 1.0}"#);
    let doc = run_json(&["capacity", "--channel", ch.to_str().unwrap()]);
    assert!((num(&doc, "capacity_nats") - LN_2).abs() < 1e-8);
    assert!((num(&doc, "r0") - 0.5).abs() < 1e-6);
    assert_eq!(doc["method"], "diagonal-profile");
    assert_eq!(doc["converged"], true);
}

#[test]
fn foliation_reports_disc_and_checked_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.5}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.3, 0.1, 0.2]}"#);
    let doc = run_json(&[
        "foliation",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    assert_eq!(doc["leaf_kind"], "plane_disc");
    // Amplitude damping foliates the ball into horizontal discs: the leaf
    // through (·, ·, x₃) is the full disc at height x₃.
    let radius = num(&doc, "disc_radius");
    assert!((radius - (1.0f64 - 0.04).sqrt()).abs() < 1e-12);
    let members = doc["optimal_decomposition"].as_array().expect("decomposition");
    assert_eq!(members.len(), 2);
    let mut total = 0.0;
    let mut avg = [0.0; 3];
    for m in members {
        let w = m["weight"].as_f64().unwrap();
        total += w;
        let b = m["bloch"].as_array().unwrap();
        for (acc, v) in avg.iter_mut().zip(b) {
            *acc += w * v.as_f64().unwrap();
        }
    }
    assert!((total - 1.0).abs() < 1e-12);
    for (acc, want) in avg.iter().zip([0.3, 0.1, 0.2]) {
        assert!((acc - want).abs() < 1e-10, "members must average to the state");
    }
}

#[test]
fn malformed_document_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "broken.json", r#"{"kind": "amplitude_damping", "p":"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.0, 0.0, 0.0]}"#);
    let out = run(&[
        "concurrence",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.json"), "stderr names the file: {err}");
}

#[test]
fn out_of_ball_state_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.5}"#);
    let st = write_file(dir.path(), "far.json", r#"{"bloch": [1.0, 1.0, 1.0]}"#);
    let out = run(&[
        "concurrence",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bloch"));
}

#[test]
fn trace_increasing_channel_exits_with_invariant_code() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(
        dir.path(),
        "nontp.json",
        r#"{"kind": "kraus",
            "a": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]],
            "b": [[[0.0, 0.0], [0.3, 0.0]], [[0.2, 0.0], [0.0, 0.0]]]}"#,
    );
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.0, 0.0, 0.0]}"#);
    let out = run(&[
        "entanglement",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace-preserving"));
}

#[test]
fn sweep_concurrence_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "phase_damping", "z": [0.0, 0.0]}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.6, 0.0, 0.0]}"#);
    let out_path = dir.path().join("table.csv");
    let out = run(&[
        "sweep",
        "--quantity",
        "concurrence",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
        "--parameter",
        "z",
        "--from",
        "0",
        "--to",
        "0.9",
        "--steps",
        "10",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&out_path).unwrap();
    assert!(!table.contains('\r'), "rows end with bare LF");
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("z,concurrence"));
    let mut rows = 0;
    for line in lines {
        let mut cols = line.split(',');
        let z: f64 = cols.next().unwrap().parse().unwrap();
        let c: f64 = cols.next().unwrap().parse().unwrap();
        assert_eq!(cols.next(), None);
        // Phase damping at (0.6, 0, 0): C = 0.6·√(1 − z²).
        assert!((c - 0.6 * (1.0 - z * z).sqrt()).abs() < 1e-12, "row {line}");
        rows += 1;
    }
    assert_eq!(rows, 10);
    // Full 17-significant-digit columns.
    assert!(table.contains("5.9999999999999998e-1"));
}

#[test]
fn sweep_capacity_reaches_one_bit_at_the_noiseless_end() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.5}"#);
    let out_path = dir.path().join("cap.csv");
    let out = run(&[
        "sweep",
        "--quantity",
        "capacity",
        "--channel",
        ch.to_str().unwrap(),
        "--parameter",
        "p",
        "--from",
        "0.05",
        "--to",
        "1.0",
        "--steps",
        "20",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "p,capacity_nats,r0");
    assert_eq!(lines.len(), 21);
    let last: Vec<f64> = lines[20].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 1.0).abs() < 1e-15);
    assert!((last[1] - LN_2).abs() < 1e-8);
    assert!((last[2] - 0.5).abs() < 1e-6);
}

#[test]
fn sweep_entanglement_over_x1_matches_binary_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "phase_damping", "z": [0.5, 0.0]}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.0, 0.0, 0.1]}"#);
    let out_path = dir.path().join("e.csv");
    let out = run(&[
        "sweep",
        "--quantity",
        "entanglement",
        "--channel",
        ch.to_str().unwrap(),
        "--state",
        st.to_str().unwrap(),
        "--parameter",
        "x1",
        "--from",
        "0",
        "--to",
        "0.9",
        "--steps",
        "10",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("x1,E"));
    for line in lines {
        let mut cols = line.split(',');
        let x1: f64 = cols.next().unwrap().parse().unwrap();
        let e: f64 = cols.next().unwrap().parse().unwrap();
        // Phase damping with z = 1/2 at x₂ = 0: E = h₂(√(1−z²)·x₁).
        let expected = qroof::h2((1.0f64 - 0.25).sqrt() * x1).unwrap();
        assert!((e - expected).abs() < 1e-10, "row {line}");
    }
}

#[test]
fn sweep_workers_reproduce_the_serial_table() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "amplitude_damping", "p": 0.5}"#);
    let st = write_file(dir.path(), "st.json", r#"{"bloch": [0.2, 0.3, -0.1]}"#);
    let serial = dir.path().join("serial.csv");
    let threaded = dir.path().join("threaded.csv");
    for (path, jobs) in [(&serial, "1"), (&threaded, "3")] {
        let out = run(&[
            "sweep",
            "--quantity",
            "entanglement",
            "--channel",
            ch.to_str().unwrap(),
            "--state",
            st.to_str().unwrap(),
            "--parameter",
            "x3",
            "--from",
            "-0.8",
            "--to",
            "0.8",
            "--steps",
            "17",
            "--jobs",
            jobs,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&serial).unwrap();
    let b = std::fs::read(&threaded).unwrap();
    assert_eq!(a, b, "worker count must not change the table");
}

#[test]
fn sweep_rejects_mismatched_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write_file(dir.path(), "ch.json", r#"{"kind": "phase_damping", "z": [0.5, 0.0]}"#);
    let out_path = dir.path().join("t.csv");
    // `p` belongs to amplitude damping; sweeping it over phase damping is
    // a usage error.
    let out = run(&[
        "sweep",
        "--quantity",
        "capacity",
        "--channel",
        ch.to_str().unwrap(),
        "--parameter",
        "p",
        "--from",
        "0.0",
        "--to",
        "1.0",
        "--steps",
        "5",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_for_a_fixed_seed() {
    let args = ["verify", "--cases", "2", "--budget", "20000"];
    let first = run(&args);
    assert!(
        first.status.success(),
        "verify failed: {}",
        String::from_utf8_lossy(&first.stdout)
    );
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "same seed must reproduce bytes");
    let text = String::from_utf8_lossy(&first.stdout);
    assert!(text.contains("result: PASS (19/19 properties)"));
}

#[test]
fn verify_flag_misuse_exits_with_usage_code() {
    let no_cases = run(&["verify", "--budget", "100000"]);
    assert_eq!(no_cases.status.code(), Some(2));
    let tiny_budget = run(&["verify", "--cases", "3", "--budget", "5"]);
    assert_eq!(tiny_budget.status.code(), Some(2));
    let zero_cases = run(&["verify", "--cases", "0"]);
    assert_eq!(zero_cases.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
}
