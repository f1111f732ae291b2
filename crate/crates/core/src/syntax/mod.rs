//! IF formulas and positive initial trees: parsing, rendering, variable
//! bookkeeping, regularity, paths and completing functions.

mod ast;
mod parse;
mod render;
mod tree;

pub use ast::{
    slash_all, slash_nonempty, subst, Atom, Connective, Formula, Literal, Quantifier, Regularity,
    Term, VarSet, VarSets,
};
pub use parse::{parse_formula, parse_tree};
pub use render::{render_formula, render_tree};
pub use tree::{
    complete, completion_flags, maximal_prefix_tree, prefix_tree, Completion, CompletionFlags,
    Locator, Path, PathStep, PrefixTree, QuantNode,
};

pub fn var_sets(f: &Formula) -> VarSets {
    f.var_sets()
}

pub fn regularity(f: &Formula) -> Regularity {
    f.regularity()
}

pub fn paths(t: &PrefixTree) -> Vec<Path> {
    t.paths()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn set(xs: &[&str]) -> VarSet {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_grammar_images() {
        assert_eq!(
            f("A x E y x=y"),
            Formula::forall("x", Formula::exists("y", Formula::eq("x", "y")))
        );
        assert_eq!(
            f("A x (E y/{x}) x=y"),
            Formula::forall(
                "x",
                Formula::quant(Quantifier::Exists, "y", &["x"], Formula::eq("x", "y"))
            )
        );
        let g = f("E y (A x/{y}) (E z/{x}) Q(x,z)");
        assert_eq!(g.quantifier_count(), 3);
        assert_eq!(g.free_vars(), set(&[]));
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        let g = f("A x P(x) | Q(x)");
        assert!(matches!(g, Formula::Quant { .. }));
        let h = f("(A x P(x)) | Q(x)");
        assert!(matches!(h, Formula::Conn(Connective::Or, ..)));
    }

    #[test]
    fn precedence_and_associativity() {
        let g = f("a=a | b=b & c=c");
        match g {
            Formula::Conn(Connective::Or, _, r) => {
                assert!(matches!(*r, Formula::Conn(Connective::And, ..)))
            }
            _ => panic!(),
        }
        let h = f("a=a & b=b & c=c");
        match h {
            Formula::Conn(Connective::And, l, _) => {
                assert!(matches!(*l, Formula::Conn(Connective::And, ..)))
            }
            _ => panic!(),
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_formula("A x\n  P(x) &") {
            Err(crate::Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("(E x/{x}) P(x)").is_err());
        assert!(parse_formula("A x []").is_err());
        assert!(parse_tree("A x P(x)").is_err());
    }

    #[test]
    fn relation_named_like_quantifier() {
        let g = f("A x (A(x) | E(x,x))");
        assert_eq!(g.quantifier_count(), 1);
    }

    #[test]
    fn render_examples() {
        assert_eq!(render_formula(&f("x=y")), "x=y");
        assert_eq!(render_formula(&f("(E z/{x}) Q(x,z)")), "(E z/{x}) Q(x,z)");
        assert_eq!(render_formula(&f("(a=a | b=b) & c=c")), "(a=a | b=b) & c=c");
        assert_eq!(render_formula(&f("x != y & ~P(x)")), "x!=y & ~P(x)");
    }

    #[test]
    fn free_variables_follow_if_recursion() {
        assert_eq!(f("(E z/{x}) Q(x,z)").free_vars(), set(&["x"]));
        assert_eq!(f("(E u/{x}) Q(x,z)").free_vars(), set(&["x", "z"]));
        let vs = var_sets(&f("x=y"));
        assert_eq!(vs.free, set(&["x", "y"]));
        assert!(vs.bound.is_empty());
    }

    #[test]
    fn regularity_examples() {
        let r = regularity(&f("A x P(x) | A x Q(x)"));
        // maximal scope nests the second quantifier under the first
        assert!(!r.regular);
        let r = regularity(&f("(A x P(x)) | (A x Q(x))"));
        assert!(r.regular && !r.strongly_regular);
        assert!(!regularity(&f("A x A x P(x)")).regular);
        let r = regularity(&f("A x E y x=y"));
        assert!(r.regular && r.strongly_regular);
    }

    #[test]
    fn prefix_tree_examples() {
        let t = maximal_prefix_tree(&f("A x (A(x) | ~B(x))"));
        assert_eq!(render_tree(&t), "A x ([] | [])");
        assert_eq!(render_tree(&prefix_tree(&f("A x E y x=y"))), "A x E y []");
        assert_eq!(prefix_tree(&f("A(x) & B(x)")), PrefixTree::Gap(0));
        let t = prefix_tree(&f("A x ((E y P(y)) | P(x) & P(x))"));
        assert_eq!(render_tree(&t), "A x ((E y []) | [])");
    }

    #[test]
    fn path_examples() {
        let t = parse_tree("E y (A x/{y}) []").unwrap();
        let ps = paths(&t);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].bound, set(&["x", "y"]));
        let t = parse_tree("E y (A x/{y}) ([] | [])").unwrap();
        assert_eq!(paths(&t).len(), 2);
        let t = parse_tree("A x ([] | [])").unwrap();
        assert!(paths(&t).iter().all(|p| p.bound == set(&["x"])));
        assert_eq!(paths(&t)[1].gap, 1);
    }

    #[test]
    fn completion_examples() {
        let t = parse_tree("E y (A x/{y}) []").unwrap();
        let e: Completion = [(0, f("(E z/{x}) Q(x,z)"))].into();
        let g = complete(&t, &e).unwrap();
        assert_eq!(g, f("E y (A x/{y}) (E z/{x}) Q(x,z)"));
        let fl = completion_flags(&t, &e).unwrap();
        assert!(fl.nice && !fl.weak);

        let ff: Completion = [(0, f("P(x,y) & Q(x,y)"))].into();
        let fl = completion_flags(&t, &ff).unwrap();
        assert!(fl.nice && fl.weak);

        let gg: Completion = [(0, f("(E u/{x}) Q(x,z)"))].into();
        let fl = completion_flags(&t, &gg).unwrap();
        assert!(fl.regularity_preserving && !fl.sentential);

        let t2 = parse_tree("E y (A x/{y}) ([] | [])").unwrap();
        let e2: Completion = [(0, f("E z P(y,z)")), (1, f("Q(y,z)"))].into();
        assert_eq!(
            complete(&t2, &e2).unwrap(),
            f("E y (A x/{y}) ((E z P(y,z)) | Q(y,z))")
        );
        let e3: Completion = [(0, f("P(x)"))].into();
        assert_eq!(complete(&PrefixTree::Gap(0), &e3).unwrap(), f("P(x)"));
        assert!(complete(&t2, &e3).is_err());
    }

    #[test]
    fn subst_and_slash_operations() {
        assert_eq!(subst(&f("Q(x,z)"), "u", "v"), f("Q(x,z)"));
        assert_eq!(subst(&f("x=u"), "u", "v"), f("x=v"));
        assert_eq!(
            subst(&f("(E w/{u}) R(u,w)"), "u", "v"),
            f("(E w/{v}) R(v,w)")
        );

        assert_eq!(slash_all(&f("P(x)"), "u"), f("P(x)"));
        assert_eq!(slash_all(&f("E y P(y)"), "u"), f("(E y/{u}) P(y)"));
        assert_eq!(slash_all(&f("(E y/{z}) P(y)"), "u"), f("(E y/{z,u}) P(y)"));

        assert_eq!(slash_nonempty(&f("E y P(y)"), "u"), f("E y P(y)"));
        assert_eq!(
            slash_nonempty(&f("(E y/{z}) P(y)"), "u"),
            f("(E y/{z,u}) P(y)")
        );
        assert_eq!(
            slash_nonempty(&f("E y (E w/{y}) P(w)"), "u"),
            f("E y (E w/{y,u}) P(w)")
        );
    }

    #[test]
    fn locator_round_trip() {
        for s in ["root", "0", "0.1.0"] {
            let l: Locator = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert_eq!("".parse::<Locator>().unwrap(), Locator::root());
    }
}
