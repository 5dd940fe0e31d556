//! The `momentpos` binary: exit codes, stdin input and byte-stable output.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_momentpos"))
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("momentpos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const DIAG: &str = r#"{"kind":"matrix","rows":[["2","0"],["0","-3"]]}"#;
const CYCLE: &str = r#"{"kind":"matrix","rows":[[0,0,1],[1,0,0],[0,1,0]]}"#;
const POLY: &str = r#"{"kind":"ncpoly","letters":2,"terms":[{"word":[1,2],"coeff":"1"},{"word":[2,1],"coeff":"-2"}]}"#;

#[test]
fn decide_auto_reports_first_negative_trace() {
    let out = with_stdin(&["decide", "--mode", "auto", "-"], DIAG);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["certificate"]["n"], 1);
    assert_eq!(v["certificate"]["value"], "-1");
}

#[test]
fn decide_orthogonal_three_cycle() {
    let out = with_stdin(&["decide", "--mode", "orthogonal", "-"], CYCLE);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["certificate"]["kind"], "finite_group");
    assert_eq!(v["certificate"]["order"], 3);
    assert_eq!(v["certificate"]["values"], serde_json::json!(["3", "0", "0"]));
}

#[test]
fn polya_witness_word() {
    let out = with_stdin(&["polya", "-"], POLY);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["word"], serde_json::json!([2, 1]));
    assert_eq!(v["entry"], serde_json::json!([1, 3]));
}

#[test]
fn emitted_certificates_verify() {
    for (name, body, cmd) in [("diag.json", DIAG, "decide"), ("cycle.json", CYCLE, "decide"), ("poly.json", POLY, "polya")] {
        let inst = temp_file(name, body);
        let cert = temp_file(&format!("{name}.cert"), "");
        let out = bin().args([cmd, &inst, "--out", &cert]).output().unwrap();
        assert!(matches!(out.status.code(), Some(0 | 1)));
        let out = bin().args(["verify-certificate", &inst, &cert]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["accepted"], true);
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let inst = temp_file("tamper.json", DIAG);
    let cert = temp_file(
        "tamper.cert",
        r#"{"verdict":"no","certificate":{"kind":"negative_moment","n":1,"value":"-2"},"budget_spent":{"moment_index":1,"degree":0,"relation_bound":0}}"#,
    );
    let out = bin().args(["verify-certificate", &inst, &cert]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_three_with_diagnostic() {
    let out = with_stdin(&["decide", "-"], "{not json");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "parse");
    let out = with_stdin(&["decide", "-"], r#"{"kind":"matrix","rows":[["1","2"]]}"#);
    assert_eq!(out.status.code(), Some(3));
    let out = with_stdin(&["decide", "--mode", "sideways", "-"], DIAG);
    assert_eq!(out.status.code(), Some(3));
    let out = with_stdin(&["decide", "--progression", "0", "1", "-"], DIAG);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_byte_stable() {
    let a = with_stdin(&["spectra", "-"], CYCLE);
    let b = with_stdin(&["spectra", "-"], CYCLE);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = with_stdin(&["decide", "-"], CYCLE);
    let b = with_stdin(&["decide", "-"], CYCLE);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn batch_jobs_keep_input_order() {
    let files: Vec<String> = [DIAG, CYCLE, DIAG].iter().enumerate().map(|(i, b)| temp_file(&format!("batch{i}.json"), b)).collect();
    let mut args = vec!["decide".to_string(), "--jobs".into(), "2".into()];
    args.extend(files.iter().cloned());
    let out = bin().args(&args).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let codes: Vec<i64> = v.as_array().unwrap().iter().map(|r| r["exit_code"].as_i64().unwrap()).collect();
    assert_eq!(codes, vec![1, 0, 1]);
}

#[test]
fn lrs_and_gadget_commands() {
    let fib = r#"{"kind":"lrs","ring":"rational","coeffs":["1","1"],"initial":["1","1"]}"#;
    let out = with_stdin(&["lrs", "--terms", "5", "-"], fib);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["terms"], serde_json::json!(["1", "1", "2", "3", "5"]));
    let cheb = r#"{"kind":"lrs","ring":"intpoly:1","coeffs":[{"vars":1,"terms":[{"exps":[1],"coeff":"2"}]},{"vars":1,"terms":[{"exps":[0],"coeff":"-1"}]}],"initial":[{"vars":1,"terms":[{"exps":[1],"coeff":"1"}]},{"vars":1,"terms":[{"exps":[0],"coeff":"-1"},{"exps":[2],"coeff":"2"}]}]}"#;
    let out = with_stdin(&["lrs", "--terms", "3", "-"], cheb);
    assert_eq!(out.status.code(), Some(0));
    let t3 = &json(&out)["terms"][2];
    assert_eq!(t3["terms"], serde_json::json!([{"exps":[1],"coeff":"-3"},{"exps":[3],"coeff":"4"}]));
    let mort = r#"{"kind":"mortality","matrices":[{"rows":[[0,1],[0,0]]},{"rows":[[0,0],[1,0]]}]}"#;
    let out = with_stdin(&["gadget", "--bound", "2", "-"], mort);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mortality"]["exponents"], serde_json::json!([2, 0]));
    assert_eq!(v["moment_identity"]["equal"], true);
    assert_eq!(v["gadget_n"]["size"], 5);
}
