//! End-to-end runs of the `deckit` binary over the bundled corpus and a
//! few broken fixtures, pinning exit codes, output shape, and output
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn deckit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deckit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn check_and_verify_pass_on_the_corpus() {
    for th in ["demo", "multi", "catchall", "single", "payload", "pure_logic", "counter", "registers"] {
        let file = corpus(&format!("{th}.dth"));
        let out = deckit(&["check", file.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "check {th}: {}", stderr(&out));
        let out = deckit(&["verify", file.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "verify {th}: {}", stderr(&out));
        assert!(stdout(&out).contains("0 mismatches"));
    }
}

#[test]
fn verify_reports_expectation_mismatches() {
    let out = deckit(&["verify", fixture("bad_expectation.dth").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("MISMATCH"), "{text}");
    assert!(text.contains("exn T"), "counterexample missing: {text}");
}

#[test]
fn static_errors_exit_2() {
    let out = deckit(&["verify", fixture("parse_error.dth").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("3:"), "diagnostic position missing: {}", stderr(&out));
    let out = deckit(&["check", fixture("formation_error.dth").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("formation violation"), "{}", stderr(&out));
    let out = deckit(&["nonsense"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn resource_caps_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_deckit"))
        .args(["check", corpus("payload.dth").to_str().unwrap()])
        .env("DECKIT_MAX_CARRIER", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("exceeding the cap"));
}

#[test]
fn eval_prints_the_result() {
    let out = deckit(&[
        "eval",
        corpus("demo.dth").to_str().unwrap(),
        "--term",
        "try(f) catch(T => mend)",
        "--input",
        "ff",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("-> ok tt\n"), "{}", stdout(&out));
    let out = deckit(&[
        "eval",
        corpus("counter.dth").to_str().unwrap(),
        "--term",
        "lookup[X]",
        "--input",
        "()",
        "--state",
        "{X=1, Y=u}",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("-> (1, {X=1, Y=u})"), "{}", stdout(&out));
}

#[test]
fn prove_accepts_the_library_and_rejects_mutations() {
    for proof in ["ax_untag_tag", "wsubs_axiom", "exc_coprod", "pair_u"] {
        let out = deckit(&[
            "prove",
            corpus("demo.dth").to_str().unwrap(),
            "--proof",
            corpus(&format!("proofs/demo/{proof}.dpf")).to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{proof}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("accepted"));
    }
    let out = deckit(&[
        "prove",
        corpus("demo.dth").to_str().unwrap(),
        "--proof",
        fixture("bad_proof.dpf").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("rejected at root"), "{}", stdout(&out));
    let out = deckit(&[
        "prove",
        corpus("demo.dth").to_str().unwrap(),
        "--proof",
        fixture("unbalanced.dpf").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn soundness_single_rule_and_catalog_listing() {
    let out = deckit(&[
        "soundness",
        corpus("single.dth").to_str().unwrap(),
        "--rules",
        "w-subs",
        "--samples",
        "40",
        "--seed",
        "42",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("0 conclusion failures"));
    let out = deckit(&["rules", "--logic", "EQ"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("EQ: 20 rules"));
    let out = deckit(&["rules", "--logic", "EXC_PLUS"]);
    assert!(stdout(&out).starts_with("EXC_PLUS: 43 rules"));
}

/// Validates a document against the subset of JSON Schema the shipped
/// schemas use: `type`, `required`, `properties`, `items`, `enum`,
/// `const`, `minimum`, `oneOf`.
fn validate(doc: &serde_json::Value, schema: &serde_json::Value, path: &str) -> Result<(), String> {
    use serde_json::Value;
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let hits = options
            .iter()
            .filter(|opt| validate(doc, opt, path).is_ok())
            .count();
        if hits != 1 {
            return Err(format!("{path}: matches {hits} oneOf branches, expected 1"));
        }
    }
    if let Some(expected) = schema.get("const") {
        if doc != expected {
            return Err(format!("{path}: expected const {expected}, found {doc}"));
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(doc) {
            return Err(format!("{path}: {doc} not in enum"));
        }
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => doc.is_object(),
            "array" => doc.is_array(),
            "string" => doc.is_string(),
            "integer" => doc.is_i64() || doc.is_u64(),
            "boolean" => doc.is_boolean(),
            "null" => doc.is_null(),
            other => return Err(format!("{path}: unsupported schema type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {ty}, found {doc}"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_i64) {
        if doc.as_i64().is_some_and(|v| v < min) {
            return Err(format!("{path}: {doc} below minimum {min}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required.iter().filter_map(Value::as_str) {
            if doc.get(key).is_none() {
                return Err(format!("{path}: missing required key `{key}`"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        for (key, sub) in props {
            if let Some(value) = doc.get(key) {
                validate(value, sub, &format!("{path}.{key}"))?;
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = doc.as_array() {
            for (i, value) in arr.iter().enumerate() {
                validate(value, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn schema(name: &str) -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn json_reports_validate_against_the_shipped_schemas() {
    let out = deckit(&["verify", corpus("demo.dth").to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    validate(&doc, &schema("verify.schema.json"), "$").unwrap();
    assert!(!doc["checks"].as_array().unwrap().is_empty());

    let out = deckit(&[
        "soundness",
        corpus("single.dth").to_str().unwrap(),
        "--rules",
        "ax-untag-tag",
        "--samples",
        "20",
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    validate(&doc, &schema("soundness.schema.json"), "$").unwrap();

    let out = deckit(&[
        "prove",
        corpus("demo.dth").to_str().unwrap(),
        "--proof",
        corpus("proofs/demo/ax_untag_tag.dpf").to_str().unwrap(),
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    validate(&doc, &schema("prove.schema.json"), "$").unwrap();
    assert_eq!(doc["verdict"], "accepted");

    let out = deckit(&[
        "prove",
        corpus("demo.dth").to_str().unwrap(),
        "--proof",
        fixture("bad_proof.dpf").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    validate(&doc, &schema("prove.schema.json"), "$").unwrap();
    assert_eq!(doc["verdict"], "rejected");
}

#[test]
fn output_is_deterministic() {
    let multi = corpus("multi.dth");
    let args = ["verify", multi.to_str().unwrap()];
    let a = deckit(&args);
    let b = deckit(&args);
    assert_eq!(a.stdout, b.stdout);
    let demo = corpus("demo.dth");
    let args = ["soundness", demo.to_str().unwrap(), "--samples", "30", "--seed", "42"];
    let a = deckit(&args);
    let b = deckit(&args);
    assert_eq!(a.stdout, b.stdout);
}
