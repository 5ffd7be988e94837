//! Exit-code contract and byte-level determinism of the command line tool.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bures(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bures"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario_path(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.pop();
    path.pop();
    path.push("scenarios");
    path.push(name);
    path.to_string_lossy().into_owned()
}

#[test]
fn pass_case_exits_zero_and_is_deterministic() {
    let path = scenario_path("commuting_qubit.json");
    let first = bures(&["--scenario", &path, "--format", "json", "--seed", "7"]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&first.stderr)
    );
    let second = bures(&["--scenario", &path, "--format", "json", "--seed", "7"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(
        first.stdout, second.stdout,
        "structured reports must be byte-identical"
    );
    assert!(!first.stdout.is_empty());

    // table output is deterministic too
    let t1 = bures(&["--scenario", &path, "--seed", "7"]);
    let t2 = bures(&["--scenario", &path, "--seed", "7"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn suite_reports_are_deterministic() {
    let args = [
        "--suite", "oracle", "--trials", "40", "--seed", "11", "--format", "json",
    ];
    let first = bures(&args);
    let second = bures(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn constructed_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("failing.json");
    // wrong expectation for the fidelity value
    std::fs::write(
        &path,
        r#"{
            "algebra": { "block_dims": [2] },
            "forms": {
                "nu": [[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]],
                "rho": [[[[0.75,0],[0,0]],[[0,0],[0.25,0]]]]
            },
            "analyses": [
                { "op": "fidelity", "nu": "nu", "rho": "rho", "expect_sqrt_p": 0.5 }
            ]
        }"#,
    )
    .unwrap();
    let out = bures(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("FAIL"),
        "table must flag the failure: {stdout}"
    );
    assert!(
        stdout.contains("residual"),
        "failures carry residual magnitudes"
    );
}

#[test]
fn malformed_density_exits_two_and_names_the_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("malformed.json");
    // negative eigenvalue in the density of `bad`
    std::fs::write(
        &path,
        r#"{
            "algebra": { "block_dims": [2] },
            "forms": {
                "bad": [[[[1.0,0],[0,0]],[[0,0],[-0.5,0]]]]
            },
            "analyses": []
        }"#,
    )
    .unwrap();
    let out = bures(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("bad"),
        "validation error names the form: {stderr}"
    );
}

#[test]
fn parse_error_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bures(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("line"),
        "parse errors carry a position: {stderr}"
    );
}

#[test]
fn unknown_analysis_and_suite_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unknown.json");
    std::fs::write(
        &path,
        r#"{
            "algebra": { "block_dims": [2] },
            "analyses": [ { "op": "frobnicate" } ]
        }"#,
    )
    .unwrap();
    let out = bures(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("frobnicate"));

    let out = bures(&["--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn serialized_witnesses_reload_and_revalidate() {
    // pull the minimizing-set representative out of a JSON report and feed
    // it back in as a scenario element
    let path = scenario_path("commuting_qubit.json");
    let out = bures(&["--scenario", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let witness = report["analyses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["op"] == "minset")
        .and_then(|a| a["values"]["representative"].as_array())
        .expect("minset representative")
        .clone();

    let dir = tempfile::tempdir().unwrap();
    let reload = dir.path().join("reload.json");
    let scenario = serde_json::json!({
        "algebra": { "block_dims": [2] },
        "forms": {
            "nu": [[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]],
            "rho": [[[[0.75,0],[0,0]],[[0,0],[0.25,0]]]]
        },
        "elements": { "witness": witness },
        "analyses": [
            { "op": "minimizing_element", "nu": "nu", "rho": "rho", "x": "witness", "expect": true }
        ]
    });
    std::fs::write(&reload, serde_json::to_string(&scenario).unwrap()).unwrap();
    let out = bures(&["--scenario", reload.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn remaining_example_scenarios_pass() {
    for name in ["orthogonal_pair.json", "kernel_obstruction.json"] {
        let out = bures(&["--scenario", &scenario_path(name)]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
