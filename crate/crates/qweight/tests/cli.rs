//! End-to-end tests of the command-line interface, including exit codes and
//! file-based state resolution.

use std::path::Path;
use std::process::{Command, Output};

fn qweight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qweight"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn json_of(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(output)).expect("valid JSON output")
}

#[test]
fn swap_test_ghz4_analytic_json() {
    let out = qweight(&[
        "swap-test",
        "--a",
        "ghz:4",
        "--b",
        "ghz:4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["n"], 4);
    assert_eq!(doc["method"], "analytic");
    let p0 = doc["p"]["0000"].as_f64().unwrap();
    assert!((p0 - 9.0 / 16.0).abs() < 1e-12);
    let p4 = doc["p"]["1111"].as_f64().unwrap();
    assert!((p4 - 1.0 / 16.0).abs() < 1e-12);
    // Zero outcomes are omitted from the JSON map.
    assert!(doc["p"].get("1000").is_none());
}

#[test]
fn swap_test_orthogonal_products_is_uniform() {
    let out = qweight(&["swap-test", "--a", "basis:000", "--b", "basis:111"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("orthogonal"), "table should classify: {text}");
    assert!(text.contains("0.125"));
}

#[test]
fn swap_test_circuit_engine_matches_analytic() {
    let analytic = json_of(&qweight(&[
        "swap-test", "--a", "ghz:3", "--b", "ghz:3", "--format", "json",
    ]));
    let circuit = json_of(&qweight(&[
        "swap-test", "--a", "ghz:3", "--b", "ghz:3", "--format", "json", "--engine", "circuit",
    ]));
    assert_eq!(circuit["method"], "circuit");
    for (mask, value) in analytic["p"].as_object().unwrap() {
        let a = value.as_f64().unwrap();
        let c = circuit["p"][mask].as_f64().unwrap_or(0.0);
        assert!((a - c).abs() < 1e-9, "{mask}: {a} vs {c}");
    }
}

#[test]
fn swap_test_sample_engine_is_seed_deterministic() {
    let args = [
        "swap-test", "--a", "ghz:2", "--b", "ghz:2", "--engine", "sample", "--shots", "2000",
        "--seed", "11", "--format", "json",
    ];
    let first = qweight(&args);
    let second = qweight(&args);
    assert!(first.status.success());
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let doc = json_of(&first);
    assert_eq!(doc["method"], "sampled");
    let total: f64 = doc["p"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn sample_engine_requires_shots() {
    let out = qweight(&["swap-test", "--a", "ghz:2", "--b", "ghz:2", "--engine", "sample"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn distance_subcommand() {
    let out = qweight(&["distance", "--code", "five-qubit", "--format", "json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["delta"], 3);
    assert_eq!(doc["pure"], true);
    assert_eq!(doc["K"].as_f64().unwrap(), 2.0);

    let shor = json_of(&qweight(&["distance", "--code", "shor", "--format", "json"]));
    assert_eq!(shor["delta"], 3);
    assert_eq!(shor["pure"], false);
}

#[test]
fn uniformity_subcommand() {
    let out = qweight(&["uniformity", "--state", "ghz:4", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["k"], 1);
}

#[test]
fn enumerators_subcommand_table_and_json() {
    let out = qweight(&["enumerators", "--code", "shor", "--which", "A"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(
        text.contains("1, 0, 9, 0, 27, 0, 75, 0, 144, 0"),
        "unexpected table: {text}"
    );
    let doc = json_of(&qweight(&["enumerators", "--code", "five-qubit", "--format", "json"]));
    let b = doc["B"].as_array().unwrap();
    assert!((b[3].as_f64().unwrap() - 15.0).abs() < 1e-9);
    assert!((doc["s"][5].as_f64().unwrap() - 9.0 / 32.0).abs() < 1e-10);
}

#[test]
fn measure_and_monogamy_subcommands() {
    let out = qweight(&[
        "measure", "--state", "ghz:4", "--subsets", "singletons", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert!((doc["measure"].as_f64().unwrap() - 0.5).abs() < 1e-10);

    let out = qweight(&[
        "monogamy", "--state", "ghz:3", "--t", "1,2", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows = json_of(&out);
    let sum = rows[0]["sum"].as_f64().unwrap();
    assert!(sum <= 1e-9);
}

#[test]
fn sample_plan_subcommand() {
    let out = qweight(&[
        "sample-plan", "--code", "five-qubit", "--j", "2", "--epsilon", "0.05", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["shots"].as_u64().unwrap(), 360_000);

    let explicit = json_of(&qweight(&[
        "sample-plan", "--n", "5", "--k", "2", "--j", "2", "--epsilon", "0.05", "--format", "json",
    ]));
    assert_eq!(explicit["shots"].as_u64().unwrap(), 360_000);
}

#[test]
fn verify_tables_passes() {
    let out = qweight(&["verify-tables"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL "));
}

#[test]
fn unresolvable_spec_exits_2() {
    let out = qweight(&["swap-test", "--a", "nonsense:5", "--b", "ghz:2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qweight(&["swap-test", "--a", "no-such-file.json", "--b", "ghz:2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shape_mismatch_exits_2() {
    let out = qweight(&["swap-test", "--a", "ghz:2:3", "--b", "ghz:2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn circuit_cap_exits_3() {
    // 2^8 * (2^8)^2 = 2^24 amplitudes, above the 2^22 cap.
    let out = qweight(&[
        "swap-test", "--a", "ghz:8", "--b", "ghz:8", "--engine", "circuit",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("analytic"), "cap message should direct to the analytic engine");
}

#[test]
fn stabilizer_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.stab");
    std::fs::write(&path, "# five-qubit code\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n").unwrap();
    let out = qweight(&["distance", "--code", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["delta"], 3);

    let bad = dir.path().join("bad.stab");
    std::fs::write(&bad, "XI\nZI\n").unwrap();
    let out = qweight(&["distance", "--code", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_matrix_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    // |0><0| on one qubit.
    std::fs::write(
        &path,
        r#"{"dims": [2], "re": [[1.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}"#,
    )
    .unwrap();
    let out = qweight(&[
        "swap-test", "--a", path.to_str().unwrap(), "--b", "basis:0", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert!((doc["p"]["0"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn named_spec_shadowed_by_file_is_ambiguous() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("five-qubit"), "ZZ\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qweight"))
        .args(["distance", "--code", "five-qubit"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("both"), "should flag the ambiguity: {err}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.json");
    let out = qweight(&[
        "swap-test", "--a", "w:3", "--b", "w:3", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    let p0 = doc["p"]["000"].as_f64().unwrap();
    assert!((p0 - 4.0 / 6.0).abs() < 1e-12);
}
