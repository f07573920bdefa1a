use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn moditer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moditer"))
        .args(args)
        .env_remove("MODITER_ORDER")
        .env_remove("MODITER_OUTPUT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn qexp_of_f() {
    let out = moditer(&["qexp", "F", "--order", "5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["details"]["coefficients"], serde_json::json!([0, 1, 0, 4, 0, 6]));
    assert_eq!(v["config"]["order"], 5);
    assert_eq!(v["config"]["cutoff"], 2000);
}

#[test]
fn qexp_rational_coefficients_are_strings() {
    let v = json(&moditer(&["qexp", "E2", "--order", "2"]));
    assert_eq!(v["details"]["coefficients"], serde_json::json!([1, -24, -72]));
    let v = json(&moditer(&["qexp", "theta", "--order", "4"]));
    assert_eq!(v["details"]["coefficients"], serde_json::json!([1, 2, 0, 0, 2]));
}

#[test]
fn mzv_modular_value() {
    let out = moditer(&["mzv", "--index", "2", "--method", "modular"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let x = v["values"][0]["value"][0].as_f64().unwrap();
    assert!((x - PI * PI / 6.0).abs() < 1e-6);
    assert!(v["values"][0]["error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn mzv_rejects_inadmissible_index_with_hint() {
    let out = moditer(&["mzv", "--index", "2,1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1,2"));
    let v = json(&moditer(&["mzv", "--index", "1,2", "--method", "all"]));
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
}

#[test]
fn eta_verify_passes() {
    let out = moditer(&["eta-verify", "--order", "200"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["passed"], 3);
    assert_eq!(v["failed"], 0);
}

#[test]
fn verify_suites_pass() {
    for suite in ["funceq", "shuffle", "thi"] {
        let out = moditer(&["verify", suite]);
        assert_eq!(code(&out), 0, "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["failed"], 0);
        for c in v["checks"].as_array().unwrap() {
            assert!(c["diff"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap() * 1e3);
        }
    }
}

#[test]
fn verification_failure_exits_two() {
    let out = moditer(&["thi-verify", "e4", "e4", "--s", "8", "--alphas", "2", "--check-tol", "1e-14"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("I(E4,E4; 8,2)"));
    assert_eq!(json(&out)["failed"], 1);
}

#[test]
fn usage_and_domain_errors_exit_one() {
    assert_eq!(code(&moditer(&["bogus"])), 1);
    assert_eq!(code(&moditer(&["qexp", "nope"])), 1);
    assert_eq!(code(&moditer(&["iterint", "delta", "--s", "x"])), 1);
    assert_eq!(code(&moditer(&["lvalue", "delta", "--s", "3"])), 1);
    assert_eq!(code(&moditer(&["--help"])), 0);
}

#[test]
fn iterint_reports_divisors_and_poles() {
    let v = json(&moditer(&["iterint", "e4", "--s", "2.5"]));
    let divisors: Vec<&str> = v["details"]["divisors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["divisor"].as_str().unwrap())
        .collect();
    assert_eq!(divisors, ["s1 = 0", "s1 = 4"]);
    let out = moditer(&["iterint", "e4", "--s", "4"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("s1 = 4"));
}

#[test]
fn output_is_deterministic() {
    let args = ["lvalue", "delta", "--s", "14"];
    let a = moditer(&args);
    let b = moditer(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("wall_time_s").is_none());
    assert!(json(&moditer(&["qexp", "F", "--timing"])).get("wall_time_s").is_some());
}

#[test]
fn flags_override_environment() {
    let run = |env: &str, args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_moditer"))
            .args(args)
            .env("MODITER_ORDER", env)
            .output()
            .unwrap();
        json(&out)["details"]["coefficients"].as_array().unwrap().len()
    };
    assert_eq!(run("7", &["qexp", "F"]), 8);
    assert_eq!(run("7", &["qexp", "F", "--order", "3"]), 4);
}

#[test]
fn csv_output() {
    let out = moditer(&["--output", "csv", "funceq-verify", "delta", "--s", "6", "--s", "5.5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("kind,name,re,im"));
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("check,Z(delta; 6)"));
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn form_files_are_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.json");
    std::fs::write(&path, r#"{"label":"tiny","level":1,"weight":12,"coeffs":[0,1,-24,252,-1472]}"#).unwrap();
    let p = path.to_str().unwrap();
    let out = moditer(&["eval", "--form", p, "--z", "0,2", "--order", "4", "--tol", "1e-3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let q = (-4.0 * PI).exp();
    let expect = q - 24.0 * q * q + 252.0 * q.powi(3) - 1472.0 * q.powi(4);
    let got = v["values"][0]["value"][0].as_f64().unwrap();
    assert!((got - expect).abs() < 1e-15);
    // positional file path works too
    assert_eq!(code(&moditer(&["eval", p, "--z", "0.1+1.5i", "--order", "4", "--tol", "1e-3"])), 0);
}
