//! Text inputs through parsing, encoding, both engines and the classifier.

use ifwb_core::encodings::{builtin_sentence, encode_instance, oracle_solve, Instance, Problem};
use ifwb_core::patterns::{classify, VerdictKind};
use ifwb_core::skolem::truth_by_skolem;
use ifwb_core::syntax::prefix_tree;
use ifwb_core::teams::{truth_value, Structure, TruthValue};

fn run(problem: Problem, text: &str) -> (bool, bool, TruthValue) {
    let inst = Instance::parse(problem, text).unwrap();
    let m = encode_instance(problem, &inst).unwrap();
    let m = Structure::from_json(&m.to_json()).unwrap();
    let f = problem.sentence();
    (
        oracle_solve(problem, &inst).unwrap(),
        truth_by_skolem(&m, &f).unwrap(),
        truth_value(&m, &f).unwrap(),
    )
}

#[test]
fn dimacs_through_both_sentences() {
    let sat = "p cnf 2 2\n1 2 0\n-1 -2 0\n";
    let unsat = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n";
    for p in [Problem::SatGh2, Problem::SatC2] {
        let (o, s, t) = run(p, sat);
        assert!(o && s && t == TruthValue::True, "{p}");
        let (o, s, t) = run(p, unsat);
        assert!(!o && !s && t != TruthValue::True, "{p}");
    }
}

#[test]
fn set_splitting_json() {
    let (o, s, _) = run(
        Problem::SetSplitting,
        r#"{"A": 3, "blocks": [[0,1],[1,2]]}"#,
    );
    assert!(o && s);
    let (o, s, _) = run(
        Problem::SetSplitting,
        r#"{"A": 3, "blocks": [[0,1],[0,2],[1,2]]}"#,
    );
    assert!(!o && !s);
}

#[test]
fn edge_lists() {
    let (o, s, t) = run(Problem::TwoCol, "p vertices 4\n0 1\n1 2\n2 3\n3 0\n");
    assert!(o && s && t == TruthValue::True);
    let (o, s, t) = run(Problem::TwoCol, "p vertices 3\n0 1\n1 2\n2 0\n");
    assert!(!o && !s);
    assert_ne!(t, TruthValue::True);
}

#[test]
fn builtin_trees_are_hard() {
    for name in ["phi_sat", "theta_sat", "eta_split"] {
        let v = classify(&prefix_tree(&builtin_sentence(name).unwrap())).unwrap();
        assert_eq!(v.verdict, VerdictKind::NPComplete, "{name}");
    }
}

#[test]
fn bad_instances_are_rejected() {
    assert!(Instance::parse(Problem::SatGh2, "p cnf 2 1\n1 0\n")
        .and_then(|i| encode_instance(Problem::SatGh2, &i))
        .is_err());
    assert!(Instance::parse(Problem::TwoCol, "p vertices 2\n0 0\n").is_err());
    assert!(
        Instance::parse(Problem::SetSplitting, r#"{"A": 2, "blocks": [[0]]}"#)
            .and_then(|i| encode_instance(Problem::SetSplitting, &i))
            .is_err()
    );
}
