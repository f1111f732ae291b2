use proptest::prelude::*;

use ifwb_core::harness::{
    check_soundness_with, enum_structures, equivalent_bounded, rule_corpus, soundness_corpus,
    structure_count, tree_corpus, weak_completions, EquivalenceMode, SignatureSpec,
};
use ifwb_core::patterns::{classify, detect_patterns};
use ifwb_core::rewrite::{apply_rule, prenex, strong_regularize, RuleId, RuleParams};
use ifwb_core::syntax::{complete, PrefixTree, Quantifier};
use ifwb_core::teams::{truth_value, TruthValue};

fn saturate_slashes(t: &mut PrefixTree, above: &mut Vec<String>) {
    match t {
        PrefixTree::Gap(_) => {}
        PrefixTree::Quant {
            kind,
            var,
            slash,
            child,
        } => {
            if *kind == Quantifier::Exists {
                slash.extend(above.iter().cloned());
            }
            above.push(var.clone());
            saturate_slashes(child, above);
            above.pop();
        }
        PrefixTree::Conn { left, right, .. } => {
            saturate_slashes(left, above);
            saturate_slashes(right, above);
        }
    }
}

#[test]
fn corrupted_rule_is_caught() {
    let trees = soundness_corpus(7, 20, 4);
    let corpus = rule_corpus(&trees, RuleId::Swap);
    assert!(!corpus.is_empty());
    let sig = SignatureSpec::binary();
    let honest = check_soundness_with(RuleId::Swap, &corpus, 3, &sig, 2, |t, at| {
        apply_rule(t, RuleId::Swap, at, &RuleParams::default())
    })
    .unwrap();
    assert!(honest.passed());
    // Makes every existential independent of everything above it.
    let broken = check_soundness_with(RuleId::Swap, &corpus, 3, &sig, 2, |t, at| {
        let mut a = apply_rule(t, RuleId::Swap, at, &RuleParams::default())?;
        saturate_slashes(&mut a.tree, &mut Vec::new());
        Ok(a)
    })
    .unwrap();
    assert!(!broken.passed());
    let c = &broken.counterexamples[0];
    assert_ne!(c.before_value, c.after_value);
}

#[test]
fn inapplicable_corpus_is_an_error() {
    let t = ifwb_core::syntax::parse_tree("A x E y []").unwrap();
    let corpus = vec![(t, ifwb_core::syntax::Locator::root())];
    let r = check_soundness_with(
        RuleId::Swap,
        &corpus,
        1,
        &SignatureSpec::binary(),
        1,
        |t, at| apply_rule(t, RuleId::Swap, at, &RuleParams::default()),
    );
    assert!(r.is_err());
}

#[test]
fn counterexample_rechecks() {
    let sig = SignatureSpec::new(&[], &[]).unwrap();
    let a = ifwb_core::syntax::parse_formula("A x E y x = y").unwrap();
    let b = ifwb_core::syntax::parse_formula("A x (E y/{x}) x = y").unwrap();
    let r = equivalent_bounded(&a, &b, &sig, 3, EquivalenceMode::TruthEquivalent).unwrap();
    let again = equivalent_bounded(&a, &b, &sig, 3, EquivalenceMode::TruthEquivalent).unwrap();
    assert_eq!(r, again);
    if let ifwb_core::harness::EquivalenceVerdict::Counterexample {
        structure,
        left,
        right,
    } = r.verdict
    {
        assert_eq!(truth_value(&structure, &a).unwrap(), left);
        assert_eq!(truth_value(&structure, &b).unwrap(), right);
        assert_eq!(right, TruthValue::Undetermined);
    } else {
        panic!("expected a counterexample");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corpus_trees_are_regular_and_classifiable(seed in any::<u64>()) {
        for t in tree_corpus(seed, 12, 5) {
            prop_assert!(t.is_regular());
            let v = classify(&t).unwrap();
            let modest = detect_patterns(&t).unwrap().modest;
            prop_assert_eq!(modest, v.branch == 5);
        }
    }

    #[test]
    fn strong_regularize_is_idempotent(seed in any::<u64>()) {
        for t in tree_corpus(seed, 8, 5) {
            let (once, _) = strong_regularize(&t).unwrap();
            prop_assert!(once.regularity().strongly_regular);
            let (twice, steps) = strong_regularize(&once).unwrap();
            prop_assert_eq!(&twice, &once);
            prop_assert!(steps.is_empty());
        }
    }

    #[test]
    fn prenex_shape(seed in any::<u64>()) {
        for t in tree_corpus(seed, 8, 5) {
            let (out, steps) = prenex(&t).unwrap();
            prop_assert!(out.is_prenex());
            prop_assert!(out.is_regular());
            prop_assert_eq!(out.gap_count(), t.gap_count());
            prop_assert!(steps.iter().all(|s| matches!(s.rule, RuleId::Rename | RuleId::ExtractWeak)));
        }
    }

    #[test]
    fn rules_keep_regularity_and_gap_order(seed in any::<u64>()) {
        let trees = tree_corpus(seed, 8, 5);
        for rule in RuleId::ALL {
            for (t, at) in rule_corpus(&trees, rule) {
                let a = apply_rule(&t, rule, &at, &RuleParams::default()).unwrap();
                prop_assert!(a.tree.is_regular());
                prop_assert_eq!(a.tree.gap_count(), t.gap_count());
                prop_assert_eq!(a.iota, (0..t.gap_count()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn weak_completions_close_the_tree(seed in any::<u64>(), k in 1usize..4) {
        let sig = SignatureSpec::binary_two_constants();
        for t in tree_corpus(seed, 6, 4) {
            for e in weak_completions(&t, &sig, k, seed).unwrap() {
                let f = complete(&t, &e).unwrap();
                let m = enum_structures(&sig, 1).next().unwrap();
                prop_assert!(truth_value(&m, &f).is_ok());
            }
        }
    }

    #[test]
    fn strong_equivalence_implies_truth_equivalence(seed in any::<u64>()) {
        let sig = SignatureSpec::binary();
        let trees = tree_corpus(seed, 4, 4);
        for t in &trees {
            let es = weak_completions(t, &sig, 2, seed).unwrap();
            let f = complete(t, &es[0]).unwrap();
            let g = complete(t, &es[1]).unwrap();
            let strong = equivalent_bounded(&f, &g, &sig, 2, EquivalenceMode::StronglyEquivalent).unwrap();
            let truth = equivalent_bounded(&f, &g, &sig, 2, EquivalenceMode::TruthEquivalent).unwrap();
            prop_assert!(!strong.is_equal() || truth.is_equal());
        }
    }

    #[test]
    fn enumeration_count(unary in 0usize..3, binary in 0usize..2, consts in 0usize..3, n in 1u32..3) {
        let names = ["P", "Q", "S", "R", "c", "d", "e"];
        let mut rels: Vec<(&str, usize)> = names[..unary].iter().map(|s| (*s, 1)).collect();
        rels.extend(names[3..3 + binary].iter().map(|s| (*s, 2)));
        let sig = SignatureSpec::new(&rels, &names[4..4 + consts]).unwrap();
        prop_assert_eq!(enum_structures(&sig, n).count() as u128, structure_count(&sig, n));
    }
}
