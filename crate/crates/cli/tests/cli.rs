use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynrisk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn cell_values(v: &Value, key: &str) -> Vec<f64> {
    v["result"][key]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"].as_f64().unwrap())
        .collect()
}

#[test]
fn evaluate_reproduces_the_binomial_example() {
    let nm = fixture("nonmiddle.json");
    let out = run(&[
        "evaluate",
        "--tree",
        &nm,
        "--payoff",
        "X2",
        "--t",
        "1",
        "--distortion",
        "prop_hazard:0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let cells = cell_values(&v, "cells");
    assert!((cells[0] - (2f64.sqrt() - 2.0)).abs() < 1e-12);
    assert!((cells[1] - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["command"]["name"], "evaluate");
    assert_eq!(v["inputs_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn pprime_fixture_value_at_time_zero() {
    let tree = fixture("lemma412_a2.json");
    let out = run(&[
        "evaluate",
        "--tree",
        &tree,
        "--payoff",
        "X",
        "--t",
        "0",
        "--distortion",
        "pprime:2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!((cell_values(&report(&out), "cells")[0] - 0.125).abs() < 1e-12);
}

#[test]
fn check_exit_codes_follow_expectations() {
    let nm = fixture("nonmiddle.json");
    let pp = fixture("lemma412_a2.json");
    let code = |args: &[&str]| run(args).status.code();
    let base = ["check", "--tree"];
    let with = |tree: &str, rest: &[&str]| -> Vec<String> {
        base.iter()
            .map(|s| s.to_string())
            .chain([tree.to_string()])
            .chain(rest.iter().map(|s| s.to_string()))
            .collect()
    };
    let sub = with(
        &nm,
        &[
            "--payoff",
            "X2",
            "--property",
            "submartingale",
            "--distortion",
            "prop_hazard:0.5",
            "--s",
            "2",
        ],
    );
    let sub: Vec<&str> = sub.iter().map(String::as_str).collect();
    assert_eq!(code(&sub), Some(0));
    let mut contradicted = sub.clone();
    contradicted.extend(["--expect", "violated"]);
    assert_eq!(code(&contradicted), Some(1));

    let weak = with(
        &pp,
        &[
            "--payoff",
            "X",
            "--property",
            "weak-acceptance",
            "--distortion",
            "pprime:2",
            "--s",
            "1",
        ],
    );
    let weak: Vec<&str> = weak.iter().map(String::as_str).collect();
    assert_eq!(code(&weak), Some(0));
    let out = run(&weak);
    let v = report(&out);
    assert_eq!(v["result"]["verdict"], "violated");
    assert!(!v["result"]["witnesses"].as_array().unwrap().is_empty());

    let middle = with(
        &nm,
        &[
            "--payoff",
            "X2",
            "--property",
            "middle-rejection",
            "--distortion",
            "prop_hazard:0.5",
            "--s",
            "1",
        ],
    );
    let middle: Vec<&str> = middle.iter().map(String::as_str).collect();
    assert_eq!(code(&middle), Some(0));

    let dcai = with(
        &pp,
        &[
            "--payoff",
            "X",
            "--property",
            "dcai-weak-rejection",
            "--family",
            "family:minvar",
            "--s",
            "1",
        ],
    );
    let dcai: Vec<&str> = dcai.iter().map(String::as_str).collect();
    assert_eq!(code(&dcai), Some(0));

    let strict = with(
        &nm,
        &[
            "--payoff",
            "X2",
            "--property",
            "super-strict",
            "--distortion",
            "minvar:2",
            "--t",
            "0",
        ],
    );
    let strict: Vec<&str> = strict.iter().map(String::as_str).collect();
    assert_eq!(code(&strict), Some(0));
}

#[test]
fn errors_exit_with_two() {
    let nm = fixture("nonmiddle.json");
    let out = run(&[
        "evaluate",
        "--tree",
        &nm,
        "--payoff",
        "Nope",
        "--t",
        "0",
        "--distortion",
        "identity",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("unknown payoff") && err.contains("X2"),
        "{err}"
    );

    let out = run(&[
        "evaluate",
        "--tree",
        &nm,
        "--payoff",
        "X2",
        "--t",
        "0",
        "--distortion",
        "wobbly:3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "evaluate",
        "--tree",
        &nm,
        "--payoff",
        "X2",
        "--t",
        "7",
        "--distortion",
        "identity",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "check",
        "--tree",
        &nm,
        "--payoff",
        "X2",
        "--property",
        "submartingale",
        "--distortion",
        "identity",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--s"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "evaluate",
            "--tree",
            "/nonexistent/tree.json",
            "--payoff",
            "X",
            "--t",
            "0",
            "--distortion",
            "identity"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn malformed_documents_report_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"schema_version\": 1,\n  \"atoms\": [ { \"probability\": } ]\n}\n",
    )
    .unwrap();
    let out = run(&["validate", "--tree", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column"), "{err}");

    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"schema_version": 1, "atoms": [{"probability": 0.5}, {"probability": 0.4}], "filtration": [[[0, 1]], [[0], [1]]]}"#,
    )
    .unwrap();
    let out = run(&["validate", "--tree", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert_eq!(v["result"]["valid"], false);
    assert!(v["result"]["diagnostic"]
        .as_str()
        .unwrap()
        .contains("sum to"));

    let out = run(&["validate", "--tree", &fixture("nonmiddle.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    let nm = fixture("nonmiddle.json");
    let args = [
        "avar", "--tree", &nm, "--payoff", "X2", "--t", "1", "--alpha", "0.3",
    ];
    let a = run(&args);
    let b = run(&args);
    let c = run(&[
        "--threads",
        "1",
        "avar",
        "--tree",
        &nm,
        "--payoff",
        "X2",
        "--t",
        "1",
        "--alpha",
        "0.3",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v = report(&a);
    assert!(v["result"]["max_form_difference"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn repro_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("continuous.json");
    let out = run(&[
        "repro",
        "weakacc-continuous",
        "--mu",
        "0.5,1",
        "--n",
        "2000",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = report(&out);
    assert_eq!(v["result"]["all_match"], true);
    assert_eq!(v["result"]["consistency"]["verdict"], "violated");
    let written = std::fs::read(&out_path).unwrap();
    use sha2::Digest;
    let digest: String = sha2::Sha256::digest(&written)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(v["result"]["tree_sha256"], digest);

    let path = out_path.to_str().unwrap();
    for entry in v["result"]["values"].as_array().unwrap() {
        let t = entry["time"].as_u64().unwrap().to_string();
        let payoff = entry["payoff"].as_str().unwrap();
        let eval = run(&[
            "evaluate",
            "--tree",
            path,
            "--payoff",
            payoff,
            "--t",
            &t,
            "--distortion",
            "measure:0.5,1",
        ]);
        assert_eq!(eval.status.code(), Some(0));
        let cells = cell_values(&report(&eval), "cells");
        let cell = entry["cell"].as_u64().unwrap() as usize;
        assert_eq!(cells[cell], entry["computed"].as_f64().unwrap());
    }
}

#[test]
fn repro_pprime_matches_closed_form() {
    let out = run(&["repro", "weakacc-pprime", "--a", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let rho0 = v["result"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["time"] == 0)
        .unwrap();
    assert!((rho0["computed"].as_f64().unwrap() - 1.0 / 6.0).abs() <= 1e-12);
    assert_eq!(
        run(&["repro", "weakacc-pprime", "--a", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "repro",
            "weakacc-continuous",
            "--mu",
            "pprime:3",
            "--n",
            "100"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn nonmiddle_repro_matches_fixture() {
    let out = run(&["repro", "nonmiddle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let values = v["result"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
    assert!(values
        .iter()
        .all(|e| e["match"] == true && e["provenance"] == "published"));
    let fixture_bytes = std::fs::read(fixture("nonmiddle.json")).unwrap();
    use sha2::Digest;
    let digest: String = sha2::Sha256::digest(&fixture_bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(v["result"]["tree_sha256"], digest);
}

#[test]
fn other_commands_produce_cells() {
    let nm = fixture("nonmiddle.json");
    for args in [
        vec![
            "quantile", "--tree", &nm, "--payoff", "X2", "--t", "1", "--alpha", "0.5", "--side",
            "lower",
        ],
        vec![
            "var", "--tree", &nm, "--payoff", "X2", "--t", "0", "--alpha", "0.25",
        ],
        vec![
            "dwvar",
            "--tree",
            &nm,
            "--payoff",
            "X2",
            "--t",
            "0",
            "--mu",
            "measure:0.25,0.5;1,0.5",
        ],
        vec![
            "dcai",
            "--tree",
            &nm,
            "--payoff",
            "X2",
            "--t",
            "1",
            "--family",
            "family:minvar",
        ],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!report(&out)["result"]["cells"]
            .as_array()
            .unwrap()
            .is_empty());
    }
    let v = report(&run(&[
        "dwvar",
        "--tree",
        &nm,
        "--payoff",
        "X2",
        "--t",
        "0",
        "--mu",
        "0.25,0.5;1,0.5",
    ]));
    let a = cell_values(&v, "cells");
    let b = cell_values(&v, "quantile_form");
    assert!((a[0] - b[0]).abs() <= 1e-12);
}
