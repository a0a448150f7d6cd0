use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const MIDDLE_FOURTH: &str = r#"{"type":"self_similar","rho":"1/4","digits":["0","2"]}"#;

fn fractspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fractspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fractspec"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn middle_fourth_triple_verifies() {
    let out = fractspec(&["check-hadamard", r#"{"p":4,"digits":["0","2"],"labels":["0","1"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "true");
    assert_eq!(r["result"]["hadamard"], true);
    assert_eq!(r["result"]["certificate"]["p"], 4);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["payload_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn failed_triple_exits_one_with_pair() {
    let out = fractspec(&["check-hadamard", r#"{"p":4,"digits":["0","1"],"labels":["0","1"]}"#]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["failure"]["left"], "0");
    assert_eq!(r["result"]["failure"]["right"], "1");
}

#[test]
fn non_spectral_reason() {
    let out = fractspec(&["decide-spectral", r#"{"m":1,"N":1,"rho":"1/3"}"#]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["decision"], "not_spectral");
    assert_eq!(r["result"]["reason"], "2\u{2224}3");
    let out = fractspec(&["decide-spectral", r#"{"m":2,"N":2,"rho":"1/8"}"#]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_csv_has_one_row_per_point() {
    let payload = format!(r#"{{"spec":{MIDDLE_FOURTH},"from":0,"to":8,"points":1000,"tol":1e-9}}"#);
    let out = fractspec(&["sweep-ft", "--format", "csv", &payload]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("xi,re,im,abs,error_bound"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1000);
    assert!(rows[0].starts_with("0.0,1.0,"));
    assert!(rows[999].starts_with("8.0,"));
}

#[test]
fn csv_is_rejected_for_non_tabular_commands() {
    let out = fractspec(&["decide-spectral", "--format", "csv", r#"{"m":1,"N":1,"rho":"1/2"}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["error"]["kind"], "usage");
}

#[test]
fn malformed_json_reports_position() {
    let out = fractspec(&["decide-spectral", "{\"m\":1,\n\"N\":}"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "invalid");
    assert_eq!(r["error"]["line"], 2);
    assert_eq!(r["error"]["column"], 5);
}

#[test]
fn schema_violations_are_invalid() {
    for payload in [
        r#"{"m":1,"N":1,"rho":"1/3","extra":0}"#,
        r#"{"m":1,"N":1}"#,
        r#"{"m":1,"N":1,"rho":"1/0"}"#,
        r#"{"m":0,"N":1,"rho":"1/2"}"#,
    ] {
        let out = fractspec(&["decide-spectral", payload]);
        assert_eq!(out.status.code(), Some(2), "{payload}");
    }
    let bad_spec = r#"{"spec":{"type":"self_similar","rho":"2","digits":["0"]},"xi":1}"#;
    assert_eq!(fractspec(&["eval-ft", bad_spec]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let payload = format!(r#"{{"spec":{MIDDLE_FOURTH},"xi":0.37}}"#);
    let a = fractspec(&["eval-ft", &payload]);
    let b = fractspec(&["eval-ft", &payload]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    // 17 significant digits, scientific notation
    assert!(text.contains("\"tol\": 1.0000000000000001e-9"));
}

#[test]
fn payload_from_file_stdin_and_output_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("job.json");
    std::fs::write(&input, r#"{"m":1,"N":1,"rho":"1/2"}"#).unwrap();
    let output = dir.path().join("report.json");
    let out = fractspec(&[
        "decide-spectral",
        &format!("@{}", input.display()),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let from_file = std::fs::read(&output).unwrap();
    let from_stdin = with_stdin(&["decide-spectral"], r#"{"m":1,"N":1,"rho":"1/2"}"#);
    assert_eq!(from_stdin.status.code(), Some(0));
    assert_eq!(from_file, from_stdin.stdout);
}

#[test]
fn missing_payload_file_is_invalid() {
    let out = fractspec(&["decide-spectral", "@/nonexistent/job.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "invalid");
}

#[test]
fn certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, payload) in [
        ("check-hadamard", r#"{"p":4,"digits":["0","2"],"labels":["0","1"]}"#),
        ("build-product-form", r#"{"m":2,"N":2,"p_prime":1}"#),
        ("search-companion", r#"{"p":4,"digits":["0","2"],"label_bound":4}"#),
    ] {
        let path = dir.path().join(format!("{cmd}.json"));
        let out = fractspec(&[cmd, payload, "--output", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let arg = format!("@{}", path.display());
        let verify = fractspec(&["verify-certificate", &arg]);
        assert_eq!(verify.status.code(), Some(0), "{cmd}");
        // the bare certificate works too
        let cert = report(&Output {
            stdout: std::fs::read(&path).unwrap(),
            ..out
        })["result"]["certificate"]
            .to_string();
        assert_eq!(fractspec(&["verify-certificate", &cert]).status.code(), Some(0));
    }
}

#[test]
fn tampered_certificate_fails() {
    let cert = r#"{"p":4,"digits":["0","2"],"labels":["0","3"]}"#;
    let out = fractspec(&["verify-certificate", cert]);
    assert_eq!(out.status.code(), Some(0));
    let cert = r#"{"p":4,"digits":["0","2"],"labels":["0","2"]}"#;
    assert_eq!(fractspec(&["verify-certificate", cert]).status.code(), Some(1));
}

#[test]
fn no_companion_exits_one() {
    let out = fractspec(&[
        "search-companion",
        r#"{"p":4,"digits":["0","1","8","9"],"label_bound":16}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["found"], false);
}

#[test]
fn spectral_commands() {
    let spec = MIDDLE_FOURTH;
    let ok = fractspec(&[
        "check-orthogonal",
        &format!(r#"{{"spec":{spec},"lam":["0","1","4","5"]}}"#),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = fractspec(&["check-orthogonal", &format!(r#"{{"spec":{spec},"lam":["0","2"]}}"#)]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(report(&bad)["result"]["difference"], "2");
    let dup = fractspec(&["check-orthogonal", &format!(r#"{{"spec":{spec},"lam":["0","0"]}}"#)]);
    assert_eq!(dup.status.code(), Some(2));

    let zero = fractspec(&["zero-member", &format!(r#"{{"spec":{spec},"x":"1"}}"#)]);
    assert_eq!(zero.status.code(), Some(0));
    assert_eq!(report(&zero)["result"]["evidence"], "factor_test");
    let nonzero = fractspec(&["zero-member", &format!(r#"{{"spec":{spec},"x":"2"}}"#)]);
    assert_eq!(nonzero.status.code(), Some(1));

    let q = fractspec(&[
        "q-function",
        &format!(r#"{{"spec":{spec},"canonical":{{"p":4,"labels":["0","1"],"depth":2}},"xi":0}}"#),
    ]);
    assert_eq!(q.status.code(), Some(0));
    let r = report(&q);
    assert_eq!(r["result"]["size"], 4);
    assert!((r["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let fam = fractspec(&[
        "max-family",
        r#"{"spec":{"type":"alternating","rho":"1/3","m":1,"n":2},"even_superset":{"s":2,"p":3,"window":"20"}}"#,
    ]);
    assert_eq!(fam.status.code(), Some(0));
    let r = report(&fam);
    assert_eq!(r["result"]["size"], 2);
    assert_eq!(r["result"]["orthogonality_bound"], 2);

    let dec = fractspec(&[
        "decompose",
        r#"{"lam":["0","1","4","5"],"b1":"4","c":2,"q1":1,"gamma1":2}"#,
    ]);
    assert_eq!(dec.status.code(), Some(0));
    assert_eq!(report(&dec)["result"]["leftovers"], serde_json::json!(["1/4", "5/4"]));
}

#[test]
fn identity_checks() {
    let out = fractspec(&[
        "verify-nu-mu",
        r#"{"m":1,"N":1,"rho":"1/2","samples":20}"#,
        "--tol",
        "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["samples"], 20);
    let out = fractspec(&[
        "verify-symmetric",
        r#"{"n":1,"rho":"1/3","samples":20,"tol":1e-8}"#,
        "--threads",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["pass"], true);
}
