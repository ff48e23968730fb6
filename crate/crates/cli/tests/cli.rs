use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablepoly"))
        .args(args)
        .env_remove("STABLEPOLY_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn c(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn check_reports_a_verified_witness() {
    let out = run(&["check", "1 - x1*x2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["verdict"], "unstable");
    let w = v["verdict"]["witness"].as_array().unwrap();
    let (x, y) = (c(&w[0]), c(&w[1]));
    assert!(x.0 > 0.0 && y.0 > 0.0);
    // x y = 1 at the witness.
    let prod = (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    assert!((prod.0 - 1.0).abs() < 1e-8 && prod.1.abs() < 1e-8);
}

#[test]
fn check_accepts_stable_input() {
    let out = run(&["check", "(1 + x1)*(2 + x1 + x2)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("probably stable"), "{text}");
}

#[test]
fn check_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("f.txt");
    std::fs::write(&text, "x1 + 1\n").unwrap();
    assert_eq!(run(&["check", text.to_str().unwrap()]).status.code(), Some(0));
    let js = dir.path().join("f.json");
    std::fs::write(&js, r#"{"nvars":1,"terms":[{"exp":[1],"re":1.0,"im":0.0},{"exp":[0],"re":-1.0,"im":0.0}]}"#).unwrap();
    let out = run(&["check", js.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"]["verdict"], "unstable");
}

#[test]
fn interlace_example_pair() {
    let psim = run(&["interlace", "Psim", "x1*(x1+3)", "(x1+1)*(x1+2)", "--format", "json"]);
    assert_eq!(psim.status.code(), Some(0));
    assert_eq!(json(&psim)["holds"], "yes");
    let p = run(&["interlace", "P", "x1*(x1+3)", "(x1+1)*(x1+2)", "--format", "json"]);
    assert_eq!(p.status.code(), Some(0));
    assert_eq!(json(&p)["holds"], "no");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["check", "x1 +"]).status.code(), Some(2));
    assert_eq!(run(&["interlace", "Q", "x1", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let out = run(&["check", "x1 +", "--format", "json"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "syntax");
}

#[test]
fn verify_single_suite() {
    let out = run(&["verify", "--suite", "real-sign", "--seed", "7", "--trials", "100", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suites"][0]["passes"], 100);
    assert!(v["suites"][0].get("ms").is_none());
    let timed = json(&run(&["verify", "--suite", "real-sign", "--trials", "5", "--timing", "--format", "json"]));
    assert!(timed["suites"][0]["ms"].is_u64());
}

#[test]
fn refuted_suite_exits_1_and_saves_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = run(&["verify", "--suite", "christoffel", "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(corpus.join("christoffel.json")).unwrap()).unwrap();
    assert_eq!(saved["suite"], "christoffel");
    assert!(!saved["refutations"].as_array().unwrap().is_empty());
}

#[test]
fn seed_env_overrides_flag() {
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_stablepoly"))
            .args(["construct", "product", "--seed", "1", "--format", "json"])
            .env("STABLEPOLY_SEED", seed)
            .output()
            .unwrap()
    };
    let a = json(&with_env("9"));
    assert_eq!(a["seed"], 9);
    let b = json(&run(&["construct", "product", "--seed", "9", "--format", "json"]));
    assert_eq!(a, b);
    assert_eq!(with_env("nine").status.code(), Some(2));
}

#[test]
fn construct_is_deterministic_and_stable() {
    let a = run(&["construct", "pencil", "--seed", "3", "--nvars", "2", "--degree", "3", "--format", "json"]);
    let b = run(&["construct", "pencil", "--seed", "3", "--nvars", "2", "--degree", "3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let text = v["text"].as_str().unwrap();
    let check = run(&["check", text, "--format", "json"]);
    assert_ne!(json(&check)["verdict"]["verdict"], "unstable");
}

#[test]
fn hadamard_and_bezout() {
    let h = run(&["hadamard", "1 + x1 + x1^2", "(x1 + 1)^3", "--format", "json"]);
    assert_eq!(h.status.code(), Some(0));
    let terms = json(&h)["poly"]["terms"].as_array().unwrap().len();
    assert_eq!(terms, 3);
    let b = run(&["bezout", "x1^2 + 3*x1 + 2", "x1 + 1.5", "--format", "json"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(json(&b)["poly"]["nvars"], 2);
    assert_eq!(run(&["bezout", "x1*x2", "x1"]).status.code(), Some(2));
}

#[test]
fn probe_never_fails() {
    let out = run(&["probe", "q2", "--trials", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["question"], "q2");
    let total: u64 = v["histogram"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total + v["skips"].as_u64().unwrap(), 6);
}

#[test]
fn suites_lists_registry() {
    let v = json(&run(&["suites", "--format", "json"]));
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|s| s["id"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 54);
    assert!(ids.contains(&"fxD") && ids.contains(&"q2-probe"));
}
