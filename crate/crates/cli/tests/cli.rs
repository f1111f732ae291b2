use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ifwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifwb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ifwb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn triangle() -> String {
    let g = scratch("tri.txt", "p vertices 3\n0 1\n1 2\n0 2\n");
    let out = ifwb(&[
        "encode",
        "--problem",
        "2col",
        "--input",
        g.to_str().unwrap(),
    ]);
    json(&out);
    scratch("tri.json", std::str::from_utf8(&out.stdout).unwrap())
        .to_string_lossy()
        .into_owned()
}

#[test]
fn triangle_is_not_two_colourable() {
    let s = triangle();
    let out = ifwb(&[
        "truth",
        "--structure",
        &s,
        "--formula",
        "xi_2col",
        "--engine",
        "both",
    ]);
    let j = json(&out);
    assert_eq!(j["skolem"], "False");
    assert_eq!(j["agree"], true);
    let pretty = ifwb(&[
        "--pretty",
        "truth",
        "--structure",
        &s,
        "--formula",
        "xi_2col",
        "--engine",
        "skolem",
    ]);
    assert_eq!(String::from_utf8_lossy(&pretty.stdout).trim(), "False");
}

#[test]
fn classify_signalling_tree() {
    let j = json(&ifwb(&["classify", "--tree", "A x E z (E y/{x}) []"]));
    assert_eq!(j["verdict"], "NPComplete");
    assert_eq!(j["family"], "signalling");
}

#[test]
fn classify_builtin_formula() {
    let j = json(&ifwb(&["classify", "--formula", "eta_split"]));
    assert_eq!(j["verdict"], "NPComplete");
    assert_eq!(j["problem"], "SET SPLITTING");
}

#[test]
fn parse_reports_regularity() {
    let f = scratch("f.if", "A x (E y/{x}) R(x,y)");
    let j = json(&ifwb(&["parse", "--formula", f.to_str().unwrap()]));
    assert_eq!(j["regularity"]["regular"], true);
    assert_eq!(j["prefix_tree"], "A x (E y/{x}) []");
}

#[test]
fn eval_on_a_team() {
    let m = scratch(
        "m.json",
        r#"{"domain": 2, "relations": {"R": [[0,1],[1,0]]}}"#,
    );
    let t = scratch("t.json", r#"{"vars": ["x"], "rows": [[0],[1]]}"#);
    let j = json(&ifwb(&[
        "eval",
        "--structure",
        m.to_str().unwrap(),
        "--formula",
        "E y R(x,y)",
        "--team",
        t.to_str().unwrap(),
    ]));
    assert_eq!(j["satisfies"], true);
    assert_eq!(j["neg_satisfies"], false);
}

#[test]
fn rewrite_single_rule_and_pipelines() {
    let j = json(&ifwb(&[
        "rewrite",
        "--tree",
        "A u (E v/{u}) []",
        "--rule",
        "swap",
        "--at",
        "root",
        "--trace",
    ]));
    assert_eq!(j["tree"], "E v (A u/{v}) []");
    assert_eq!(j["steps"][0]["complexity_note"], "preserves_C");
    let j = json(&ifwb(&[
        "rewrite",
        "--tree",
        "A x ((E u []) | [])",
        "--pipeline",
        "prenex",
    ]));
    assert_eq!(j["tree"], "A x E u ([] | [])");
    assert_eq!(j["steps"][0]["rule"], "extract-weak");
    let j = json(&ifwb(&[
        "rewrite",
        "--tree",
        "(A x []) | (A x [])",
        "--pipeline",
        "strong-regularize",
    ]));
    assert_eq!(j["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let side = ifwb(&[
        "rewrite",
        "--tree",
        "A u E v []",
        "--rule",
        "swap",
        "--at",
        "root",
    ]);
    assert_eq!(side.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&side.stderr).contains("slash set"));
    let parse = ifwb(&["parse", "--formula", "A x (E y/{x"]);
    assert_eq!(parse.status.code(), Some(2));
    let missing = ifwb(&[
        "truth",
        "--structure",
        "/nonexistent.json",
        "--formula",
        "phi_sat",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_rule = ifwb(&[
        "rewrite", "--tree", "A x []", "--rule", "nope", "--at", "root",
    ]);
    assert_eq!(bad_rule.status.code(), Some(2));
    let no_cmd = ifwb(&[]);
    assert_eq!(no_cmd.status.code(), Some(2));
}

#[test]
fn encode_with_sentence() {
    let cnf = scratch("s.cnf", "p cnf 2 1\n1 -2 0\n");
    let j = json(&ifwb(&[
        "encode",
        "--problem",
        "sat-gh2",
        "--input",
        cnf.to_str().unwrap(),
        "--emit-sentence",
    ]));
    assert_eq!(j["sentence_name"], "phi_sat");
    assert_eq!(j["structure"]["domain"], 5);
}

#[test]
fn verify_suites() {
    let j = json(&ifwb(&[
        "verify",
        "--suite",
        "encodings",
        "--max-size",
        "5",
    ]));
    assert_eq!(j["passed"], true);
    let j = json(&ifwb(&["verify", "--suite", "classifier"]));
    assert_eq!(j["passed"], true);
    let bad = ifwb(&["verify", "--suite", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = ifwb(&[
        "verify",
        "--suite",
        "semantics",
        "--max-size",
        "2",
        "--seed",
        "3",
    ]);
    let b = ifwb(&[
        "verify",
        "--suite",
        "semantics",
        "--max-size",
        "2",
        "--seed",
        "3",
    ]);
    let strip = |o: &Output| {
        let mut v = json(o);
        for c in v["checks"].as_array_mut().unwrap() {
            c["elapsed_ms"] = Value::Null;
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
