//! End-to-end tests of the `hopfforge` binary: the build → decompose →
//! subalgebras pipeline over real files, byte-level determinism of every
//! report, the documented exit codes, and the rank-2 classification
//! commands.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopfforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout parses as JSON")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout_str(out),
        stderr_str(out)
    );
}

fn build_instance(dir: &Path, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join("instance.json");
    let mut full = args.to_vec();
    let path_str = path.to_str().expect("utf-8 path").to_string();
    full.extend_from_slice(&["--out", &path_str]);
    let out = run(&full);
    assert_code(&out, 0);
    path
}

#[test]
fn build_report_is_deterministic_and_correct() {
    let a = run(&["build", "--example", "ex3_2", "--n", "3"]);
    let b = run(&["build", "--example", "ex3_2", "--n", "3"]);
    assert_code(&a, 0);
    assert_eq!(a.stdout, b.stdout, "identical invocations must agree byte for byte");

    let v = json(&a);
    assert_eq!(v["dim"], 12);
    assert_eq!(v["construction"]["conductor"], 12);
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn pipeline_build_decompose_subalgebras() {
    let dir = tempfile::tempdir().expect("tempdir");
    let inst = build_instance(dir.path(), &["build", "--example", "ex3_2", "--n", "3"]);
    let inst = inst.to_str().expect("utf-8 path");

    let d = run(&["decompose", inst]);
    assert_code(&d, 0);
    let d2 = run(&["decompose", inst]);
    assert_eq!(d.stdout, d2.stdout, "decompose must be deterministic");
    let v = json(&d);
    assert_eq!(v["dim"], 12);
    assert_eq!(v["conductor"], 12);
    assert_eq!(
        v["coalgebra"],
        serde_json::json!([{ "r": 1, "mult": 4 }, { "r": 2, "mult": 2 }])
    );
    assert_eq!(
        v["algebra"],
        serde_json::json!([{ "n": 1, "mult": 4 }, { "n": 2, "mult": 2 }])
    );
    assert_eq!(v["algebra_route"], "smash");
    assert_eq!(v["oracle_checked"], true);
    assert_eq!(v["grouplikes"]["order"], 4);
    assert_eq!(v["grouplikes"]["invariants"], serde_json::json!([2, 2]));

    let s = run(&["subalgebras", inst]);
    assert_code(&s, 0);
    let v = json(&s);
    assert_eq!(v["count"], 7);
    let dims: Vec<u64> = v["subalgebras"]
        .as_array()
        .expect("array")
        .iter()
        .map(|e| e["dim"].as_u64().expect("dim"))
        .collect();
    assert_eq!(dims, vec![1, 2, 2, 2, 4, 6, 12]);

    let s = run(&["subalgebras", inst, "--normal-only"]);
    assert_code(&s, 0);
    let v = json(&s);
    assert_eq!(v["count"], 4);
    let dims: Vec<u64> = v["subalgebras"]
        .as_array()
        .expect("array")
        .iter()
        .map(|e| e["dim"].as_u64().expect("dim"))
        .collect();
    assert_eq!(dims, vec![1, 2, 6, 12]);
    assert!(
        v["unique_normal"].is_null(),
        "abelian acting group admits no unique-normal verification"
    );
}

#[test]
fn text_format_renders_summaries() {
    let dir = tempfile::tempdir().expect("tempdir");
    let inst = build_instance(dir.path(), &["build", "--example", "ex3_5"]);
    let inst = inst.to_str().expect("utf-8 path");
    let d = run(&["decompose", inst, "--format", "text"]);
    assert_code(&d, 0);
    let text = stdout_str(&d);
    assert!(text.contains("dim: 36"));
    assert!(text.contains("(r=1)x9"));
    assert!(text.contains("(r=3)x3"));
    assert!(text.contains("(n=1)x9"));
    assert!(text.contains("(n=3)x3"));
    assert!(text.contains("order 9 (Z3 x Z3)"));
}

#[test]
fn splitting_field_failure_and_conductor_override() {
    let dir = tempfile::tempdir().expect("tempdir");
    let inst = build_instance(dir.path(), &["build", "--example", "ex3_6"]);
    let inst = inst.to_str().expect("utf-8 path");

    // At the minimal conductor the matrix constituents are not rational,
    // so the fallback decomposition must refuse rather than approximate.
    let d = run(&["decompose", inst]);
    assert_code(&d, 1);
    assert!(stderr_str(&d).contains("enlarge the conductor"));

    let d = run(&["decompose", inst, "--conductor", "4"]);
    assert_code(&d, 0);
    let v = json(&d);
    assert_eq!(v["conductor"], 4);
    assert_eq!(v["algebra_route"], "wedderburn");
    assert_eq!(
        v["algebra"],
        serde_json::json!([{ "n": 1, "mult": 8 }, { "n": 2, "mult": 6 }])
    );
    assert!(v["grouplikes"]["invariants"].is_null());
}

#[test]
fn exit_codes_for_bad_inputs() {
    let out = run(&["build", "--example", "nope"]);
    assert_code(&out, 1);
    let err: serde_json::Value =
        serde_json::from_str(&stderr_str(&out)).expect("error JSON on stderr");
    assert_eq!(err["error"]["code"], 1);
    assert_eq!(err["error"]["kind"], "precondition");

    let out = run(&["decompose", "/nonexistent/instance.json"]);
    assert_code(&out, 3);

    let dir = tempfile::tempdir().expect("tempdir");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"not\": \"an instance\"}").expect("write");
    let out = run(&["decompose", bad.to_str().expect("utf-8 path")]);
    assert_code(&out, 3);
    assert!(stderr_str(&out).contains("corrupt instance file"));
}

#[test]
fn custom_spec_validation_failures_exit_one() {
    let dir = tempfile::tempdir().expect("tempdir");
    let spec = dir.path().join("custom.json");
    std::fs::write(
        &spec,
        serde_json::json!({
            "mode": "general",
            "cal_g": { "kind": "cyclic", "n": 3 },
            "theta": { "kind": "inversion" },
            "g": { "kind": "cyclic", "n": 4 },
            "pi": [0, 1, 0, 0],
            "embed": 2
        })
        .to_string(),
    )
    .expect("write");
    let out = run(&["build", "--custom", spec.to_str().expect("utf-8 path")]);
    assert_code(&out, 1);
    assert!(stderr_str(&out).contains("pi is not a homomorphism"));
}

#[test]
fn custom_gtheta_spec_builds() {
    let dir = tempfile::tempdir().expect("tempdir");
    let spec = dir.path().join("custom.json");
    std::fs::write(
        &spec,
        serde_json::json!({
            "mode": "gtheta",
            "cal_g": { "kind": "cyclic", "n": 5 },
            "theta": { "kind": "inversion" }
        })
        .to_string(),
    )
    .expect("write");
    let out = run(&[
        "build",
        "--custom",
        spec.to_str().expect("utf-8 path"),
        "--format",
        "text",
    ]);
    assert_code(&out, 0);
    let text = stdout_str(&out);
    assert!(text.contains("dim: 20"));
    assert!(text.contains("conductor: 20"));
    assert!(text.contains("pass"));
}

#[test]
fn rank2_witness_counts_match_the_classification() {
    let z2 = run(&["rank2", "z2"]);
    assert_code(&z2, 0);
    let v = json(&z2);
    assert_eq!(v["witness_count"], 1);
    assert_eq!(v["witnesses"][0]["biproduct"]["dim"], 4);
    assert_eq!(v["witnesses"][0]["biproduct"]["verification"]["passed"], true);
    assert_eq!(v["witnesses"][0]["biproduct"]["antipode_order"], 4);
    assert!(v["trivial"].as_str().expect("trivial line").contains("k[Z_2]"));

    let z3 = run(&["rank2", "z3"]);
    assert_code(&z3, 0);
    assert_eq!(json(&z3)["witness_count"], 0);

    let klein = run(&["rank2", "z2xz2"]);
    assert_code(&klein, 0);
    let v = json(&klein);
    assert_eq!(v["witness_count"], 6);
    for w in v["witnesses"].as_array().expect("array") {
        assert_eq!(w["biproduct"]["verification"]["passed"], true);
        assert_eq!(w["biproduct"]["antipode_order"], 4);
    }

    let bad = run(&["rank2", "q8"]);
    assert_code(&bad, 1);
    assert!(stderr_str(&bad).contains("unrecognized group"));
}
