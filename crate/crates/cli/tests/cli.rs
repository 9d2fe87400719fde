use std::process::{Command, Output};

use serde_json::Value;

fn opoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opoly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn coeffs_of(o: &Output) -> Vec<String> {
    let v = &json_lines(o)[0]["coeffs"];
    v.as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect()
}

#[test]
fn coeffs_examples() {
    let o = opoly(&["coeffs", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(coeffs_of(&o), ["4", "-5", "1"]);

    let o = opoly(&["coeffs", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "1", "--n", "2"]);
    assert_eq!(coeffs_of(&o), ["0", "-1", "1"]);

    let o = opoly(&["coeffs", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "1", "--n", "0"]);
    assert_eq!(coeffs_of(&o), ["1"]);
}

#[test]
fn both_paths_agree() {
    let o = opoly(&[
        "coeffs", "--family", "racah", "--alpha", "-4", "--beta", "1/2", "--gamma", "1/3", "--delta", "1/5", "--n", "6",
        "--path", "both",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_lines(&o)[0]["var"], "lambda");
}

#[test]
fn rationals_round_trip() {
    let o = opoly(&["coeffs", "--family", "krawtchouk", "--p", "2/6", "--N", "3", "--n", "3"]);
    let first = coeffs_of(&o);
    assert_eq!(json_lines(&o)[0]["params"]["p"], "1/3");
    for c in &first {
        let again = opoly(&["coeffs", "--family", "meixner", "--beta", c, "--c", "-1/2", "--n", "0"]);
        assert_eq!(json_lines(&again)[0]["params"]["beta"].as_str().unwrap(), c);
    }
}

#[test]
fn exit_codes() {
    // parse error
    let o = opoly(&["coeffs", "--family", "hahn", "--alpha", "x", "--beta", "1", "--N", "5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = opoly(&["coeffs", "--family", "hahn", "--beta", "1", "--N", "5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = opoly(&["limits", "--relation", "nowhere", "--p", "1/2", "--N", "3", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));

    // degenerate factor, named on stderr
    let o = opoly(&["coeffs", "--family", "hahn", "--alpha", "-1/2", "--beta", "-3/2", "--N", "5", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(alpha+beta+n+1)_n"));

    // violated orthogonality condition
    let o = opoly(&["gram", "--family", "hahn", "--alpha", "-3", "--beta", "1", "--N", "5", "--nmax", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("condition"));

    // certification fails with the real doubling factor
    let o = opoly(&[
        "gram", "--family", "dual-hahn", "--gamma", "-11/5", "--delta", "1/2", "--N", "1", "--nmax", "4", "--nu", "real",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_lines(&o)[0]["certified"], false);
}

#[test]
fn gram_reports() {
    let o = opoly(&["gram", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "5", "--nmax", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert_eq!(r["certified"], true);
    assert_eq!(r["entries"].as_array().unwrap().len(), 100);
    assert!(r["max_offdiag_rel"].as_f64().unwrap() <= 1e-8);

    let o = opoly(&["gram", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "5", "--nmax", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert_eq!(r["certified"], true);
    assert_eq!(r["discrete"][0], "56");
}

#[test]
fn check_and_gf() {
    let o = opoly(&["check", "--id", "factorization", "--family", "krawtchouk", "--p", "1/2", "--N", "3", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["verdict"], "ExactPass");

    let o = opoly(&["check", "--id", "delta-relations", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "5", "--n", "4"]);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l["verdict"] == "ExactPass"));

    let o = opoly(&["gf", "--family", "dual-hahn", "--gamma", "1/2", "--delta", "3/2", "--N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let ids: Vec<String> = json_lines(&o).iter().map(|l| l["id"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["generating-function/dual-hahn-1", "generating-function/dual-hahn-2"]);
}

#[test]
fn seeded_suites_are_deterministic() {
    let args = ["check", "--id", "all", "--family", "hahn", "--draws", "6", "--seed", "42", "--n", "6"];
    let a = opoly(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_opoly")).args(args).env("OPOLY_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json_lines(&a).len() >= 6 * 4);
}

#[test]
fn limits_ladder() {
    let o = opoly(&["limits", "--relation", "hahn-to-krawtchouk", "--p", "1/2", "--N", "3", "--n", "2", "--ladder", "1e2,1e3,1e4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    let e: Vec<f64> = r["errors"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!(e[0] > e[1] && e[1] > e[2]);
    assert!((r["slope"].as_f64().unwrap() + 1.0).abs() <= 0.2);
}

#[test]
fn zeros_csv() {
    let o = opoly(&["zeros", "--family", "hahn", "--alpha", "1", "--beta", "1", "--N", "5", "--n", "15", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "re,im,kind");
    assert_eq!(rows.len(), 16);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",integer")).count(), 6);

    let o = opoly(&["zeros", "--family", "hahn", "--alpha", "1", "--beta", "15", "--N", "5", "--n", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert!(r["line"].is_null());
    assert_eq!(r["zeros"]["residual_roots"].as_array().unwrap().len(), 9);
}
