use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const FIRST: &str = "(i+j)*x*k + k*x*(j+k) = 1+k";
const NO_ROOT: &str = "(i+j)*x*k + k*x*(j+1) = 1+k";
const FAMILY: &str = "(i+j)*x*k + k*x*(j+1) = j-k";
const NEWTON: &str = "x^2 - i*x - x*j + k = 0";

fn ncalg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncalg")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ncalg_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.insert(1, "--output");
    all.insert(2, "json");
    let (code, stdout, stderr) = ncalg(&all);
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, value)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ncalg-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn assert_common_keys(v: &Value) {
    for key in ["status", "solution", "free", "residual_norm"] {
        assert!(v.get(key).is_some(), "missing `{key}` in {v}");
    }
}

#[test]
fn solve_unique_text() {
    let (code, out, _) = ncalg(&["solve", FIRST]);
    assert_eq!(code, 0);
    assert_eq!(out, "x = -1/2 - 1/2j\ncross-check (richardson): agrees\n");
}

#[test]
fn solve_unique_json_matches_text() {
    for method in ["auto", "field", "richardson"] {
        let (code, v) = ncalg_json(&["solve", "--method", method, FIRST]);
        assert_eq!(code, 0);
        assert_common_keys(&v);
        assert_eq!(v["status"], "unique");
        assert_eq!(v["solution"], serde_json::json!([["-1/2", "0", "-1/2", "0"]]));
        assert_eq!(v["residual_norm"], 0.0);
    }
    let (_, v) = ncalg_json(&["solve", FIRST]);
    assert_eq!(v["method"], "field");
    assert_eq!(v["cross_check"]["agrees"], true);
}

#[test]
fn solve_with_quasideterminant_engine_and_column_layout() {
    let (code, out, _) = ncalg(&["solve", "--method", "richardson", "--engine", "quasideterminant", "--layout", "columns", FIRST]);
    assert_eq!(code, 0);
    assert_eq!(out, "x = -1/2 - 1/2j\n");
}

#[test]
fn solve_inconsistent() {
    let (code, out, _) = ncalg(&["solve", NO_ROOT]);
    assert_eq!(code, 1);
    assert!(out.starts_with("inconsistent"));
    let (code, v) = ncalg_json(&["solve", NO_ROOT]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "inconsistent");
    assert_eq!(v["solution"], serde_json::json!([]));
}

#[test]
fn solve_parametric_with_field_method() {
    let (code, out, _) = ncalg(&["solve", "--method", "field", FAMILY]);
    assert_eq!(code, 0);
    assert_eq!(out, "parametric: 2 free scalar parameter(s) C0, C1\nx = -1 + C0*(1 + i) + C1*(-2 - j + k)\n");
    let (_, v) = ncalg_json(&["solve", "--method", "field", FAMILY]);
    assert_eq!(v["status"], "parametric");
    let free = v["free"].as_array().unwrap();
    assert_eq!(free.len(), 2);
    assert_eq!(free[0]["name"], "C0");
    assert_eq!(free[0]["direction"], serde_json::json!([["1", "1", "0", "0"]]));
}

#[test]
fn auto_mode_reports_disagreement() {
    let (code, out, _) = ncalg(&["solve", FAMILY]);
    assert_eq!(code, 1);
    assert!(out.contains("methods disagree"));
    assert!(out.contains("candidate x = -1 + i"));
    let (code, v) = ncalg_json(&["solve", FAMILY]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "disagreement");
    assert_eq!(v["cross_check"]["status"], "unverified");
    assert_eq!(v["cross_check"]["agrees"], false);
}

#[test]
fn richardson_alone_flags_unverified_candidate() {
    let (code, v) = ncalg_json(&["solve", "--method", "richardson", FAMILY]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "unverified");
    let norm = v["residual_norm"].as_f64().unwrap();
    assert!((norm - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn solve_two_unknowns() {
    let (code, out, _) = ncalg(&["solve", "x1 + x2 = 1", "x1 - x2*j = i"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("x1 = "));
    assert!(lines[1].starts_with("x2 = "));
    let x1 = lines[0].trim_start_matches("x1 = ");
    let x2 = lines[1].trim_start_matches("x2 = ");
    let (code, out, _) = ncalg(&["check", "--x", &format!("x1={x1}"), "--x", &format!("x2={x2}"), "x1 + x2 = 1", "x1 - x2*j = i"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn solve_float_mode() {
    let (code, v) = ncalg_json(&["solve", "--scalar", "float", FIRST]);
    assert_eq!(code, 0);
    let coords: Vec<f64> = v["solution"][0].as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect();
    for (got, want) in coords.iter().zip([-0.5, 0.0, -0.5, 0.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn solve_system_file() {
    let json = r#"{"unknowns": 1, "equations": [{"terms": [
        {"left": ["0", "1", "1", "0"], "var": 0, "right": ["0", "0", "0", "1"]},
        {"left": ["0", "0", "0", "1"], "var": 0, "right": ["0", "0", "1", "1"]}
    ], "rhs": ["1", "0", "0", "1"]}]}"#;
    let path = temp_file("system.json", json);
    let (code, out, err) = ncalg(&["solve", "--system", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("x1 = -1/2 - 1/2j") || out.starts_with("x = -1/2 - 1/2j"), "{out}");
}

#[test]
fn custom_algebra_file() {
    // split-complex numbers: e1² = 1
    let json = r#"{"name": "split-complex", "dim": 2, "basis": ["1", "e"],
        "constants": [[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "0"]]]}"#;
    let path = temp_file("split.json", json);
    let (code, out, err) = ncalg(&["solve", "--method", "field", "--algebra", path.to_str().unwrap(), "(1+e)*x + x = 3"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "x = 2 - e\n");
}

#[test]
fn newton_text_and_json() {
    let (code, out, _) = ncalg(&["newton", "--x0", "1+j", "--tol", "1e-6", NEWTON]);
    assert_eq!(code, 0);
    assert!(out.contains("x1 = 0.333333 + 0.166667i + 0.833333j"));
    assert!(out.contains("status: converged after 5 step(s)"));

    let (code, v) = ncalg_json(&["newton", "--x0", "1+j", NEWTON]);
    assert_eq!(code, 0);
    assert_common_keys(&v);
    assert_eq!(v["status"], "converged");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 7);
    for row in trace {
        for key in ["k", "x", "residual", "norm"] {
            assert!(row.get(key).is_some());
        }
    }
    assert!(v["residual_norm"].as_f64().unwrap() < 1e-9);
}

#[test]
fn newton_exact_mode_first_step() {
    let (code, v) = ncalg_json(&["newton", "--scalar", "rational", "--x0", "1+j", "--max-iter", "1", NEWTON]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "max-iterations");
    assert_eq!(v["solution"], serde_json::json!([["1/3", "1/6", "5/6", "0"]]));
}

#[test]
fn newton_singular_derivative() {
    let (code, v) = ncalg_json(&["newton", "--x0", "0", "x^2 = -1"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "singular-derivative");
}

#[test]
fn newton_polynomial_file() {
    let json = r#"{"monomials": [[["1","0","0","0"], ["1","0","0","0"], ["1","0","0","0"]],
        [["0","-1","0","0"], ["1","0","0","0"]], [["1","0","0","0"], ["0","0","-1","0"]], [["0","0","0","1"]]]}"#;
    let path = temp_file("poly.json", json);
    let (code, out, err) = ncalg(&["newton", "--x0", "1+j", "--polynomial", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("status: converged"));
}

#[test]
fn invert_tensor_text_json_and_file() {
    let (code, out, _) = ncalg(&["invert-tensor", "(i+j)(x)k + k(x)(j+k)"]);
    assert_eq!(code, 0);
    assert_eq!(out, "f = (i + j)⊗k + k⊗(j + k)\ng = 1/4(i⊗j) + 1/4(i⊗k) + 1/4(j⊗j) + 1/4(j⊗k) + 1/2(k⊗k)\n");

    let (code, v) = ncalg_json(&["invert-tensor", "(i+j)(x)k + k(x)(j+k)"]);
    assert_eq!(code, 0);
    assert_common_keys(&v);
    assert_eq!(v["status"], "invertible");

    let path = temp_file("tensor.json", r#"{"pairs": [[["0","1","1","0"], ["0","0","0","1"]], [["0","0","0","1"], ["0","0","1","1"]]]}"#);
    let (code, file_out, _) = ncalg(&["invert-tensor", "--tensor-file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(file_out.lines().nth(1), out.lines().nth(1));
}

#[test]
fn invert_singular_tensor() {
    let (code, out, _) = ncalg(&["invert-tensor", "i⊗k + j⊗k + k⊗1 + k⊗j"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("singular"));
    let (_, v) = ncalg_json(&["invert-tensor", "i⊗k + j⊗k + k⊗1 + k⊗j"]);
    assert_eq!(v["status"], "singular");
}

#[test]
fn check_values() {
    let (code, out, _) = ncalg(&["check", "--x", "-1/2 - 1/2j", FIRST]);
    assert_eq!(code, 0);
    assert_eq!(out, "equation 1: residual = 0\nsatisfied\n");
    let (code, v) = ncalg_json(&["check", "--x", "i", FIRST]);
    assert_eq!(code, 1);
    assert_common_keys(&v);
    assert_eq!(v["status"], "not-satisfied");
    assert_eq!(v["residuals"], serde_json::json!([["-1", "1", "0", "-2"]]));
    let (code, _, _) = ncalg(&["check", "--x", "i", FAMILY]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["solve", "x1 + x2 = "],
        vec!["solve", "q*x = 1"],
        vec!["solve", "x*x = 1"],
        vec!["bogus"],
        vec!["newton", "x^2 = 1"],
        vec!["solve", "--algebra", "/nonexistent/algebra.json", FIRST],
    ] {
        let (code, _, err) = ncalg(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = ncalg(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["solve", "newton", "invert-tensor", "check"] {
        assert!(out.contains(sub));
    }
}
