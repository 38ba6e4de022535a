mod common;

use std::fs;

use common::*;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn section<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["tensors"].as_array().unwrap().iter().find(|s| s["name"] == name).unwrap()
}

fn class<'a>(report: &'a Value, tag: &str) -> &'a Value {
    report["classification"]["classes"].as_array().unwrap().iter().find(|c| c["class"] == tag).unwrap()
}

fn temp_problem(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn flat_analysis_has_no_curvature() {
    let out = walker(&["analyze", "-i", &example("flat.walker"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for name in ["Gamma", "R", "rho", "tau", "F", "Q", "nabla_rho"] {
        assert_eq!(section(&r, name)["count"], 0, "{name}");
    }
    assert_eq!(section(&r, "char_poly")["components"][0]["value"], "lambda^4");
    let text = stdout(&walker(&["analyze", "-i", &example("flat.walker")]));
    assert!(text.contains("[R] 0 components"));
    assert!(text.contains("[nabla_rho] 0 components"));
}

#[test]
fn general_analysis_lists_fourteen_christoffel_symbols() {
    let r = json(&walker(&["analyze", "-i", &example("general.walker"), "--json"]));
    let gamma = section(&r, "Gamma");
    assert_eq!(gamma["count"], 14);
    let first = &gamma["components"][0];
    assert_eq!(first["index"], serde_json::json!([1, 1, 3]));
    assert_eq!(first["value"], "1/2*a_1");
    assert_eq!(section(&r, "tau")["components"][0]["value"], "a_11 + a_22");
    assert_eq!(r["input"]["mode"], "general");
    assert_eq!(r["input"]["concrete"], false);
}

#[test]
fn restricted_family_has_zero_scalar_curvature() {
    let out = walker(&["analyze", "-i", &example("restricted.walker")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\n  tau = 0\n"));
}

#[test]
fn einstein_example_lies_in_every_class() {
    let out = walker(&["classify", "-i", &example("einstein.walker"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["input"]["defaulted"], serde_json::json!(["d"]));
    for tag in ["E", "P", "A", "B", "C"] {
        let v = &class(&r, tag)["verdict"];
        assert_eq!(v["status"], "holds_off_singular_set", "{tag}");
        assert_eq!(v["locus"], serde_json::json!(["x3 + x4 - 4"]), "{tag}");
    }
}

#[test]
fn linear_b_fails_parallel_ricci() {
    let r = json(&walker(&["classify", "-i", &example("linear-b.walker"), "--classes", "P", "--json"]));
    let classes = r["classification"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 1);
    let v = &classes[0]["verdict"];
    assert_eq!(v["status"], "fails");
    let residuals = v["residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 1);
    assert_eq!(residuals[0]["expr"], "b*b_3 - b_33");
    assert_eq!(residuals[0]["value"], "x3");
}

#[test]
fn ricci_flat_member_holds_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let p = temp_problem(&dir, "zero.walker", "func b(x3,x4) = 0\nfunc c(x3,x4) = 0\nfunc d(x3,x4) = x3^2*x4\n");
    let r = json(&walker(&["classify", "-i", &p, "--json"]));
    for tag in ["E", "P", "A", "B", "C"] {
        assert_eq!(class(&r, tag)["verdict"]["status"], "holds", "{tag}");
    }
}

#[test]
fn symbolic_classification_prints_systems_and_paper_diff() {
    let r = json(&walker(&["classify", "-i", &example("restricted.walker"), "--paper-diff", "--json"]));
    assert!(class(&r, "P")["verdict"].is_null());
    assert_eq!(class(&r, "P")["generators"].as_array().unwrap().len(), 6);
    assert_eq!(class(&r, "A")["generators"].as_array().unwrap().len(), 4);
    let diffs = r["classification"]["paper_diff"].as_array().unwrap();
    let statements: Vec<&str> = diffs.iter().map(|d| d["statement"].as_str().unwrap()).collect();
    assert_eq!(
        statements,
        ["Einstein", "parallel Ricci, statement", "parallel Ricci, proof", "cyclic parallel Ricci", "Ricci-Codazzi"]
    );
    let eq: Vec<bool> = diffs.iter().map(|d| d["equivalent"].as_bool().unwrap()).collect();
    assert_eq!(eq, [true, true, true, false, false]);
}

#[test]
fn verify_default_and_strict() {
    let out = walker(&["verify", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    let must = r["concordance"]["must_match"].as_array().unwrap();
    assert_eq!(must.len(), 7);
    assert!(must.iter().all(|c| c["ok"] == true));
    let strict = walker(&["verify", "--strict"]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(stderr(&strict).contains("covariant derivative of Ricci"));
}

#[test]
fn flat_geodesic_is_a_straight_line() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flat.csv");
    let csv_s = csv.display().to_string();
    let out = walker(&[
        "geodesic", "-i", &example("flat.walker"), "--v0", "1,2,3,4", "--t", "1", "--dt", "0.01", "-o", &csv_s, "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let g = &json(&out)["geodesic"];
    assert_eq!(g["max_energy_drift"], 0.0);
    for (k, want) in [1.0, 2.0, 3.0, 4.0].iter().enumerate() {
        let x = g["end"]["x"][k].as_f64().unwrap();
        assert!((x - want).abs() < 1e-12, "x{} = {x}", k + 1);
    }
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,x3,x4,v1,v2,v3,v4,energy"));
    assert_eq!(lines.count(), 101);
}

#[test]
fn quadratic_geodesic_conserves_energy() {
    let out = walker(&[
        "geodesic", "-i", &example("quadratic.walker"), "--x0", "0.5,0,0,0", "--v0", "0.3,-0.2,0.5,0.1", "--t", "1",
        "--dt", "0.001", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let drift = json(&out)["geodesic"]["max_energy_drift"].as_f64().unwrap();
    assert!(drift <= 1e-8, "{drift}");
}

#[test]
fn geodesic_into_the_pole_exits_4() {
    let args = ["geodesic", "-i", &example("einstein.walker"), "--x0", "0,0,1.9,1.9", "--v0", "0,0,1,1", "--t", "3"];
    let out = walker(&args);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    assert!(text.contains("last good state"));
    assert!(text.contains("x3 + x4 - 4 = 0"));
    let mut json_args = args.to_vec();
    json_args.push("--json");
    let f = &json(&walker(&json_args))["geodesic"]["failure"];
    assert_eq!(f["kind"], "pole");
    let x = &f["last"]["x"];
    assert!(x[2].as_f64().unwrap() + x[3].as_f64().unwrap() < 4.0);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = temp_problem(&dir, "bad.walker", "func b(x3,x4) = x1\nfunc c(x3,x4) = 0\n");
    let out = walker(&["analyze", "-i", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains(":1:"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let syntax = temp_problem(&dir, "syntax.walker", "func a(x1,x2,x3,x4) = (x1 +\n");
    assert_eq!(walker(&["classify", "-i", &syntax]).status.code(), Some(2));
    assert_eq!(walker(&["analyze", "-i", "/nonexistent/problem.walker"]).status.code(), Some(2));
    assert_eq!(walker(&["classify", "-i", &example("flat.walker"), "--classes", "Q"]).status.code(), Some(2));
    assert_eq!(walker(&["geodesic", "-i", &example("general.walker"), "--v0", "1,0,0,0"]).status.code(), Some(2));
    assert_eq!(walker(&["geodesic", "-i", &example("flat.walker"), "--v0", "1,0,0"]).status.code(), Some(2));
}

#[test]
fn negative_initial_values_parse() {
    let out = walker(&["geodesic", "-i", &example("flat.walker"), "--x0", "-1,-2,0,0", "--v0", "-1,0,0,0", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["geodesic"]["end"]["x"][0], -2.0);
}

#[test]
fn digest_is_sha256_of_the_input() {
    let path = example("einstein.walker");
    let want = hex::encode(Sha256::digest(fs::read(&path).unwrap()));
    let r = json(&walker(&["classify", "-i", &path, "--json"]));
    assert_eq!(r["input"]["sha256"], want);
    assert_eq!(r["tool"]["version"], env!("CARGO_PKG_VERSION"));
}

fn all_invocations() -> Vec<Vec<String>> {
    let e = |n: &str| example(n);
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        v(&["analyze", "-i", &e("flat.walker")]),
        v(&["analyze", "-i", &e("general.walker")]),
        v(&["analyze", "-i", &e("restricted.walker")]),
        v(&["classify", "-i", &e("einstein.walker"), "--paper-diff"]),
        v(&["classify", "-i", &e("restricted.walker"), "--paper-diff"]),
        v(&["classify", "-i", &e("quadratic.walker"), "--paper-diff"]),
        v(&["classify", "-i", &e("linear-b.walker")]),
        v(&["verify"]),
        v(&["verify", "--strict"]),
        v(&["geodesic", "-i", &e("quadratic.walker"), "--v0", "0.3,-0.2,0.5,0.1", "--dt", "0.01"]),
        v(&["geodesic", "-i", &e("einstein.walker"), "--x0", "0,0,1.9,1.9", "--v0", "0,0,1,1"]),
    ]
}

#[test]
fn json_reports_match_the_schema() {
    let schema = schema();
    for args in all_invocations() {
        let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
        args.push("--json");
        let r = json(&walker(&args));
        let errors = validate(&schema, &r);
        assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    }
}

#[test]
fn schema_validator_rejects_bad_reports() {
    let schema = schema();
    let mut r = json(&walker(&["classify", "-i", &example("linear-b.walker"), "--json"]));
    assert!(validate(&schema, &r).is_empty());
    r["classification"]["classes"][0]["verdict"]["status"] = "maybe".into();
    r["status"]["exit_code"] = 7.into();
    r["input"].as_object_mut().unwrap().remove("sha256");
    r["extra"] = true.into();
    let errors = validate(&schema, &r);
    assert_eq!(errors.len(), 4, "{errors:#?}");
}

#[test]
fn output_is_deterministic() {
    for args in all_invocations() {
        for json in [false, true] {
            let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
            if json {
                args.push("--json");
            }
            let (a, b) = (walker(&args), walker(&args));
            assert_eq!(a.stdout, b.stdout, "{args:?}");
            assert_eq!(a.status.code(), b.status.code());
        }
    }
}
