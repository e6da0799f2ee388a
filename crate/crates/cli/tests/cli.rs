use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use smphull_cli::{run, EXIT_BAD_INPUT, EXIT_BUDGET, EXIT_CUT, EXIT_NEGATIVE, EXIT_OK};
use tempfile::TempDir;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: tempfile::tempdir().unwrap() }
    }

    fn put(&self, name: &str, body: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    }
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["smphull"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

const MONO3: &str = r#"{"n":3,"c":{"3":"1"}}"#;
const B12: &str = r#"{"ell":"1","u":"2"}"#;

#[test]
fn facets_happy_path() {
    let fs = Files::new();
    let (p, b) = (fs.put("f.json", MONO3), fs.put("b.json", B12));
    let (code, out, _) = call(&["facets", "--poly", &p, "--box", &b]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["family"], "supermodular");
    assert_eq!(v["core_facets"].as_array().unwrap().len(), 4);
    assert_eq!(v["expanded_count"], "15");
    assert!(v.get("expanded").is_none());

    let (code, out, _) = call(&["facets", "--poly", &p, "--box", &b, "--expand"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["expanded"].as_array().unwrap().len(), 15);

    let (code, _, err) = call(&["facets", "--poly", &p, "--box", &b, "--expand", "--cap", "10"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("cap"));
}

#[test]
fn separate_exit_codes() {
    let fs = Files::new();
    let p = fs.put("f.json", r#"{"n":3,"c":{"3":"5"}}"#);
    let b = fs.put("b.json", r#"{"ell":"-2","u":"2"}"#);
    let bad = fs.put("bad.json", r#"{"x":["3","0","0"],"y":"0"}"#);
    let (code, out, _) = call(&["separate", "--poly", &p, "--box", &b, "--point", &bad]);
    assert_eq!(code, EXIT_CUT);
    let v = json(&out);
    assert_eq!(v["status"], "violated-bound");
    assert_eq!(v["violated"]["beta"], serde_json::json!(["-1", "0", "0"]));

    let high = fs.put("high.json", r#"{"x":["0","0","0"],"y":"50"}"#);
    let (code, out, _) = call(&["separate", "--poly", &p, "--box", &b, "--point", &high]);
    assert_eq!(code, EXIT_CUT);
    let v = json(&out);
    assert_eq!(v["status"], "violated-facet");
    assert_eq!(v["violation"], "10");

    let origin = fs.put("origin.json", r#"{"x":["0","0","0"],"y":"0"}"#);
    let (code, out, _) = call(&["separate", "--poly", &p, "--box", &b, "--point", &origin]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["status"], "inside");

    // Core facets from a saved `facets` output, without the polynomial.
    let (_, facets, _) = call(&["facets", "--poly", &p, "--box", &b]);
    let cf = fs.put("core.json", &facets);
    let (code, out, _) = call(&["separate", "--box", &b, "--point", &high, "--core-facets", &cf]);
    assert_eq!(code, EXIT_CUT);
    assert_eq!(json(&out)["violation"], "10");

    let (code, _, err) = call(&["separate", "--box", &b, "--point", &high]);
    assert_eq!(code, EXIT_BAD_INPUT);
    assert!(err.contains("--core-facets"));
}

#[test]
fn oracle_hull_guard_and_output() {
    let fs = Files::new();
    let p8 = fs.put("f8.json", r#"{"n":8,"c":{"8":"1"}}"#);
    let b = fs.put("b.json", r#"{"ell":"0","u":"1"}"#);
    let (code, _, err) = call(&["oracle-hull", "--poly", &p8, "--box", &b]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("budget"));

    let p2 = fs.put("f2.json", r#"{"n":2,"c":{"2":"1"}}"#);
    let (code, out, _) = call(&["oracle-hull", "--poly", &p2, "--box", &b]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["facets"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_input_is_code_two() {
    let fs = Files::new();
    let p = fs.put("f.json", "{not json");
    let b = fs.put("b.json", B12);
    assert_eq!(call(&["facets", "--poly", &p, "--box", &b]).0, EXIT_BAD_INPUT);
    let p = fs.put("g.json", MONO3);
    let inverted = fs.put("inv.json", r#"{"ell":"2","u":"1"}"#);
    assert_eq!(call(&["facets", "--poly", &p, "--box", &inverted]).0, EXIT_BAD_INPUT);
    assert_eq!(call(&["facets", "--poly", &p, "--box", &b, "--bogus"]).0, EXIT_BAD_INPUT);
    assert_eq!(call(&["facets", "--poly", &p, "--box", &b, "--expand", "--cap", "0"]).0, EXIT_BAD_INPUT);
    assert_eq!(call(&["facets", "--poly", "/nonexistent.json", "--box", &b]).0, EXIT_BAD_INPUT);
    assert_eq!(call(&["golden-check", "table9"]).0, EXIT_BAD_INPUT);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn nonneg_and_rlt() {
    let fs = Files::new();
    let p = fs.put("p.json", r#"{"n":3,"alpha":{"[1,2,3]":"1"}}"#);
    let b = fs.put("b.json", r#"{"L":["-1","-1","-1"],"U":["1","1","1"]}"#);
    let (code, out, _) = call(&["nonneg-check", "--poly", &p, "--box", &b]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(json(&out)["witness"], serde_json::json!(["1", "1", "-1"]));

    let q = fs.put("q.json", r#"{"n":2,"alpha":{"[1,2]":"1"}}"#);
    let unit = fs.put("u.json", r#"{"ell":"0","u":"1"}"#);
    let (code, _, _) = call(&["nonneg-check", "--poly", &q, "--box", &unit]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = call(&["rlt-decompose", "--poly", &q, "--box", &unit]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["pi"]["[1,2]"], "1");
    assert_eq!(v["pi"]["[]"], "0");
}

#[test]
fn certify_tight_set_optimize_supermodular() {
    let fs = Files::new();
    let p = fs.put("f.json", MONO3);
    let unit = fs.put("b.json", r#"{"ell":"0","u":"1"}"#);
    let lower = fs.put("q.json", r#"{"beta0":"0","beta":["1","0","0"],"beta_prime":"0"}"#);
    let (code, out, _) = call(&["certify", "--poly", &p, "--box", &unit, "--ineq", &lower]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["certificate"]["valid"], true);
    assert_eq!(v["certificate"]["is_facet"], false);

    let res1 = fs.put("r.json", r#"{"beta0":"-6","beta":["1","2","4"],"beta_prime":"-1"}"#);
    let b12 = fs.put("b12.json", B12);
    let (_, out, _) = call(&["certify", "--poly", &p, "--box", &b12, "--ineq", &res1]);
    let v = json(&out);
    assert_eq!(v["certificate"]["is_facet"], true);
    assert_eq!(v["conditions"]["distinct_coeff_iff"], true);

    let mid = fs.put("m.json", r#"{"x":["2","3/2","1"],"y":"3"}"#);
    let (code, out, _) = call(&["tight-set", "--poly", &p, "--box", &b12, "--ineq", &res1, "--point", &mid]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["tight_simplex_ks"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(v["point"]["tight"], true);
    let unsorted = fs.put("un.json", r#"{"x":["1","2","1"],"y":"2"}"#);
    let (code, _, _) = call(&["tight-set", "--poly", &p, "--box", &b12, "--ineq", &res1, "--point", &unsorted]);
    assert_eq!(code, EXIT_BAD_INPUT);

    let five = fs.put("f5.json", r#"{"n":3,"c":{"3":"5"}}"#);
    let b22 = fs.put("b22.json", r#"{"ell":"-2","u":"2"}"#);
    let a = fs.put("a.json", r#"{"alpha":["1","0","0"],"alpha_prime":"-1"}"#);
    let (code, out, _) = call(&["optimize", "--poly", &five, "--box", &b22, "--alpha", &a]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["value"], "42");
    assert_eq!(v["argmax"]["x"], serde_json::json!(["2", "-2", "2"]));

    let (code, out, _) = call(&["check-supermodular", "--poly", &p, "--box", &b12]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["strict"], true);
}

#[test]
fn extform_formats() {
    let fs = Files::new();
    let p = fs.put("f.json", MONO3);
    let b = fs.put("b.json", B12);
    let (code, out, _) = call(&["extform", "--poly", &p, "--box", &b]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["variables"].as_array().unwrap().len(), 24);
    assert_eq!(v["equalities"].as_array().unwrap().len(), 13);
    let (code, out, _) = call(&["extform", "--poly", &p, "--box", &b, "--format", "lp"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(" sum_w2: w2_1 + w2_2 + w2_3 - 5 lambda2 = 0\n"));
}

#[test]
fn golden_checks_pass() {
    for t in ["table1", "table2", "table3", "example3b"] {
        let (code, out, _) = call(&["golden-check", t]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let fs = Files::new();
    let p = fs.put("f.json", r#"{"n":4,"c":{"2":"1/2","3":"-1","4":"3"}}"#);
    let b = fs.put("b.json", r#"{"ell":"-1/2","u":"3/2"}"#);
    for cmd in ["oracle-hull", "check-supermodular", "extform"] {
        let (c1, o1, _) = call(&[cmd, "--poly", &p, "--box", &b, "--threads", "1"]);
        let (c4, o4, _) = call(&[cmd, "--poly", &p, "--box", &b, "--threads", "4"]);
        assert_eq!((c1, &o1), (c4, &o4), "{cmd}");
    }
}

#[test]
fn binary_honours_thread_variable() {
    let fs = Files::new();
    let p = fs.put("f.json", MONO3);
    let b = fs.put("b.json", B12);
    let exe = env!("CARGO_BIN_EXE_smphull");
    let ok = Command::new(exe)
        .args(["facets", "--poly", &p, "--box", &b])
        .env("SMPHULL_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(exe)
        .args(["facets", "--poly", &p, "--box", &b])
        .env("SMPHULL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_BAD_INPUT));
}
