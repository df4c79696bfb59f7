//! Replays every bundled dataset through the binary.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite `datasets/golden/*.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde::Deserialize;
use serde_json::Value;

#[derive(Deserialize)]
struct Case {
    name: String,
    schema: String,
    exit_code: i32,
    args: Vec<String>,
}

#[derive(Deserialize)]
struct FailureCase {
    exit_code: i32,
    args: Vec<String>,
    stderr: String,
}

#[derive(Deserialize)]
struct Manifest {
    cases: Vec<Case>,
    failures: Vec<FailureCase>,
}

fn datasets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../datasets")
}

fn run(args: &[String]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csm-born"))
        .current_dir(datasets())
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest() -> Manifest {
    let text = fs::read_to_string(datasets().join("golden/manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = fs::read_to_string(datasets().join(format!("schemas/{name}.schema.json"))).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn golden_outputs_match_and_validate() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for case in manifest().cases {
        let out = run(&case.args);
        assert_eq!(out.status.code(), Some(case.exit_code), "{}: {}", case.name, String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8(out.stdout).unwrap();
        let golden = datasets().join(format!("golden/{}.json", case.name));
        if update {
            fs::write(&golden, &stdout).unwrap();
        } else {
            let expected = fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing {}", golden.display()));
            assert!(stdout == expected, "{} differs from its golden file", case.name);
        }
        let value: Value = serde_json::from_str(&stdout).unwrap();
        let validator = schema(&case.schema);
        let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{} violates schema: {errors:?}", case.name);
    }
}

#[test]
fn reruns_are_byte_identical() {
    for case in manifest().cases {
        let a = run(&case.args);
        let b = run(&case.args);
        assert_eq!(a.stdout, b.stdout, "{}", case.name);
        assert_eq!(a.status.code(), b.status.code(), "{}", case.name);
    }
}

#[test]
fn input_errors_exit_two_with_message() {
    for case in manifest().failures {
        let out = run(&case.args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(case.exit_code), "{:?}: {stderr}", case.args);
        assert!(stderr.contains(&case.stderr), "{:?}: {stderr}", case.args);
        assert!(out.stdout.is_empty(), "{:?}", case.args);
    }
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["ks".into(), "no/such/file.json".into()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn version_and_help_exit_zero() {
    for flag in ["--version", "--help"] {
        let out = run(&[flag.into()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn text_format_renders_leaves() {
    let out = run(&[
        "--format".into(),
        "text".into(),
        "born".into(),
        "states/density_mixed_dim3.json".into(),
        "states/context_standard_dim3.json".into(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("context: \"standard\""));
    assert!(text.contains("sum: 1.0"));
}

#[test]
fn uhlhorn_reports_mixed_branches_as_negative() {
    let doc: Value =
        serde_json::from_str(&fs::read_to_string(datasets().join("raymaps/unitary_dim3.json")).unwrap()).unwrap();
    let anti: Value =
        serde_json::from_str(&fs::read_to_string(datasets().join("raymaps/antiunitary_dim3.json")).unwrap()).unwrap();
    // keep the gadget images from the unitary map, take the remaining images from the conjugate one
    let mut mixed = doc.clone();
    let pairs = mixed["pairs"].as_array_mut().unwrap();
    let gadget = 3 + 2 * 2;
    for (k, pair) in pairs.iter_mut().enumerate().skip(gadget) {
        pair["target"] = anti["pairs"][k]["target"].clone();
    }
    let dir = std::env::temp_dir().join(format!("csm-born-mixed-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mixed.json");
    fs::write(&path, serde_json::to_string(&mixed).unwrap()).unwrap();
    let out = run(&["uhlhorn".into(), path.display().to_string()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["classification"]["verdict"], "Neither");
    assert!(report["fit"].is_null());
    fs::remove_dir_all(dir).unwrap();
}
