//! Bounded-model checking: structure enumeration, bounded equivalence,
//! rule-soundness sweeps, seeded corpora and the `verify` suites.
//!
//! Nothing here is a proof. Every report carries the bound it was
//! checked under.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encodings::{
    encode_instance, oracle_solve, CnfInstance, Graph, Instance, Problem, SetSplitInstance,
};
use crate::error::{Error, Result};
use crate::patterns::{classify, named_tree, VerdictKind};
use crate::rewrite::{
    apply_rule, prenex, transport_completion, Applied, ComplexityNote, RuleId, RuleParams,
};
use crate::skolem::{budget_from_env, truth_by_skolem, truth_by_skolem_with_budget};
use crate::syntax::{
    complete, Atom, Completion, Connective, Formula, Literal, Locator, PrefixTree, Quantifier,
    Term, VarSet,
};
use crate::teams::{neg_satisfies, satisfies, truth_value, Relation, Structure, Team, TruthValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureSpec {
    pub relations: BTreeMap<String, usize>,
    pub constants: Vec<String>,
}

impl SignatureSpec {
    pub fn new(relations: &[(&str, usize)], constants: &[&str]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in relations
            .iter()
            .map(|r| r.0)
            .chain(constants.iter().copied())
        {
            if !seen.insert(name) {
                return Err(Error::Input(format!("signature repeats the name `{name}`")));
            }
        }
        Ok(SignatureSpec {
            relations: relations.iter().map(|(n, k)| (n.to_string(), *k)).collect(),
            constants: constants.iter().map(|c| c.to_string()).collect(),
        })
    }

    /// One binary relation `R`.
    pub fn binary() -> Self {
        SignatureSpec::new(&[("R", 2)], &[]).expect("distinct")
    }

    /// One binary relation `R` and constants `c`, `d`.
    pub fn binary_two_constants() -> Self {
        SignatureSpec::new(&[("R", 2)], &["c", "d"]).expect("distinct")
    }
}

fn all_tuples(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Number of structures of size `n` over `sig`.
pub fn structure_count(sig: &SignatureSpec, n: u32) -> u128 {
    let bits: u32 = sig
        .relations
        .values()
        .map(|&k| (n as u128).pow(k as u32) as u32)
        .sum();
    (1u128 << bits) * (n as u128).pow(sig.constants.len() as u32)
}

/// All structures with domain exactly `n`, in a fixed order: relation
/// contents vary fastest, constants slowest.
///
/// # Panics
/// If the relation tuples at this size exceed 63 bits.
pub fn enum_structures(sig: &SignatureSpec, n: u32) -> impl Iterator<Item = Structure> + '_ {
    let slots: Vec<(&String, usize, Vec<Vec<u32>>)> = sig
        .relations
        .iter()
        .map(|(name, &k)| (name, k, all_tuples(n, k)))
        .collect();
    let bits: usize = slots.iter().map(|s| s.2.len()).sum();
    assert!(bits < 64, "too many relation tuples to enumerate");
    let rel_count = 1u64 << bits;
    let const_count = (n as u64).pow(sig.constants.len() as u32);
    let total = if n == 0 { 0 } else { rel_count * const_count };
    (0..total).map(move |i| {
        let mut m = Structure::new(n);
        let mut mask = i % rel_count;
        for (name, k, tuples) in &slots {
            let mut r = Relation::new(*k);
            for t in tuples {
                if mask & 1 == 1 {
                    r.tuples.insert(t.clone());
                }
                mask >>= 1;
            }
            m.relations.insert((*name).clone(), r);
        }
        let mut c = i / rel_count;
        for name in &sig.constants {
            m.constants.insert(name.clone(), (c % n as u64) as u32);
            c /= n as u64;
        }
        m
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceMode {
    TruthEquivalent,
    StronglyEquivalent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    Equal,
    Counterexample {
        structure: Structure,
        left: TruthValue,
        right: TruthValue,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub mode: EquivalenceMode,
    pub max_n: u32,
    pub structures_checked: u64,
    pub verdict: EquivalenceVerdict,
}

impl EquivalenceReport {
    pub fn is_equal(&self) -> bool {
        self.verdict == EquivalenceVerdict::Equal
    }
}

fn values_match(mode: EquivalenceMode, a: TruthValue, b: TruthValue) -> bool {
    match mode {
        EquivalenceMode::StronglyEquivalent => a == b,
        EquivalenceMode::TruthEquivalent => (a == TruthValue::True) == (b == TruthValue::True),
    }
}

/// Compares `f` and `g` on every structure of size 1..=`max_n`; the first
/// disagreement in sweep order is reported.
pub fn equivalent_bounded(
    f: &Formula,
    g: &Formula,
    sig: &SignatureSpec,
    max_n: u32,
    mode: EquivalenceMode,
) -> Result<EquivalenceReport> {
    let mut checked = 0;
    for n in 1..=max_n {
        for m in enum_structures(sig, n) {
            checked += 1;
            let (a, b) = (truth_value(&m, f)?, truth_value(&m, g)?);
            if !values_match(mode, a, b) {
                return Ok(EquivalenceReport {
                    mode,
                    max_n,
                    structures_checked: checked,
                    verdict: EquivalenceVerdict::Counterexample {
                        structure: m,
                        left: a,
                        right: b,
                    },
                });
            }
        }
    }
    Ok(EquivalenceReport {
        mode,
        max_n,
        structures_checked: checked,
        verdict: EquivalenceVerdict::Equal,
    })
}

// ---------------------------------------------------------------------
// Random generation

const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn random_literal(rng: &mut ChaCha8Rng, pool: &[Term], sig: &SignatureSpec) -> Literal {
    let pick = |rng: &mut ChaCha8Rng| pool.choose(rng).expect("nonempty pool").clone();
    let atom = if !sig.relations.is_empty() && rng.gen_bool(0.7) {
        let rels: Vec<_> = sig.relations.iter().collect();
        let (name, &k) = *rels.choose(rng).expect("nonempty");
        Atom::Rel {
            name: name.clone(),
            args: (0..k).map(|_| pick(rng)).collect(),
        }
    } else {
        Atom::Eq(pick(rng), pick(rng))
    };
    Literal {
        positive: rng.gen_bool(0.5),
        atom,
    }
}

/// A literal, or two literals joined by one ∧ or ∨.
fn random_qf(rng: &mut ChaCha8Rng, pool: &[Term], sig: &SignatureSpec) -> Formula {
    let lit = |rng: &mut ChaCha8Rng| Formula::Lit(random_literal(rng, pool, sig));
    match rng.gen_range(0..4) {
        0 | 1 => lit(rng),
        2 => Formula::and(lit(rng), lit(rng)),
        _ => Formula::or(lit(rng), lit(rng)),
    }
}

/// `count` weak nice completions of `t`: each gap gets a quantifier-free
/// formula over its path's bound variables and the constants of `sig`.
pub fn weak_completions(
    t: &PrefixTree,
    sig: &SignatureSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<Completion>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let paths = t.paths();
    let pools: Vec<Vec<Term>> = paths
        .iter()
        .map(|p| {
            p.bound
                .iter()
                .map(|v| Term::Var(v.clone()))
                .chain(sig.constants.iter().map(|c| Term::Const(c.clone())))
                .collect()
        })
        .collect();
    if let Some(p) = paths.iter().zip(&pools).find(|(_, pool)| pool.is_empty()) {
        return Err(Error::Input(format!(
            "gap {} has no bound variable or constant to complete with",
            p.0.gap
        )));
    }
    Ok((0..count)
        .map(|_| {
            paths
                .iter()
                .zip(&pools)
                .map(|(p, pool)| (p.gap, random_qf(&mut rng, pool, sig)))
                .collect()
        })
        .collect())
}

fn map_vars(t: &PrefixTree, map: &BTreeMap<String, String>) -> PrefixTree {
    let m = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
    match t {
        PrefixTree::Gap(i) => PrefixTree::Gap(*i),
        PrefixTree::Quant {
            kind,
            var,
            slash,
            child,
        } => PrefixTree::Quant {
            kind: *kind,
            var: m(var),
            slash: slash.iter().map(m).collect(),
            child: Box::new(map_vars(child, map)),
        },
        PrefixTree::Conn { op, left, right } => {
            PrefixTree::conn(*op, map_vars(left, map), map_vars(right, map))
        }
    }
}

fn random_tree(rng: &mut ChaCha8Rng, depth: usize, path: &mut Vec<String>) -> PrefixTree {
    if depth == 0 {
        return PrefixTree::Gap(0);
    }
    let roll = if path.is_empty() {
        0
    } else {
        rng.gen_range(0..100)
    };
    if roll < 50 {
        let free: Vec<&str> = NAMES
            .iter()
            .copied()
            .filter(|n| !path.iter().any(|p| p == n))
            .collect();
        let var = match free.choose(rng) {
            Some(v) => v.to_string(),
            None => format!("t{}", path.len()),
        };
        let slash: VarSet = path
            .iter()
            .filter(|_| rng.gen_bool(0.35))
            .cloned()
            .collect();
        let kind = if rng.gen_bool(0.5) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        path.push(var.clone());
        let child = random_tree(rng, depth - 1, path);
        path.pop();
        PrefixTree::Quant {
            kind,
            var,
            slash,
            child: Box::new(child),
        }
    } else if roll < 80 {
        let op = if rng.gen_bool(0.5) {
            Connective::And
        } else {
            Connective::Or
        };
        let l = random_tree(rng, depth - 1, path);
        let r = random_tree(rng, depth - 1, path);
        PrefixTree::conn(op, l, r)
    } else {
        PrefixTree::Gap(0)
    }
}

/// Exemplars of every pattern class, seeded into corpora.
pub const CORPUS_EXEMPLARS: [&str; 10] = [
    "modest_prefix",
    "signalling",
    "henkin_linear",
    "gh1_and",
    "gh1_or",
    "gh2_and",
    "gh2_or",
    "c1",
    "c2",
    "c1p",
];

fn exemplar(rng: &mut ChaCha8Rng, name: &str) -> PrefixTree {
    let t = named_tree(name).expect("exemplar names are named trees");
    let vars: Vec<String> = crate::patterns::tree_variables(&t).into_iter().collect();
    let mut pool: Vec<String> = NAMES
        .iter()
        .map(|s| s.to_string())
        .chain((1..=4).map(|i| format!("a{i}")))
        .collect();
    pool.shuffle(rng);
    let map: BTreeMap<String, String> = vars.iter().cloned().zip(pool.iter().cloned()).collect();
    let t = map_vars(&t, &map);
    if rng.gen_bool(0.5) {
        let used: BTreeSet<&String> = map.values().collect();
        let fresh = pool
            .iter()
            .find(|p| !used.contains(p))
            .expect("pool is larger");
        PrefixTree::quant(Quantifier::Forall, fresh, &[], t)
    } else {
        t
    }
}

/// Deterministic corpus of regular trees. Even slots hold renamed
/// exemplars of each pattern class until they run out; the rest are
/// random trees rooted at a quantifier.
pub fn tree_corpus(seed: u64, count: usize, max_depth: usize) -> Vec<PrefixTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = max_depth.max(2);
    (0..count)
        .map(|i| {
            if i % 2 == 0 && i / 2 < CORPUS_EXEMPLARS.len() {
                return exemplar(&mut rng, CORPUS_EXEMPLARS[i / 2]);
            }
            loop {
                let t = random_tree(&mut rng, depth, &mut Vec::new()).renumbered();
                if t.is_regular() {
                    break t;
                }
            }
        })
        .collect()
}

/// Small trees on which each rule applies, added to soundness corpora so
/// that every rule is exercised regardless of the seed.
pub const RULE_EXEMPLARS: [&str; 8] = [
    "E x (E y/{x}) []",
    "A x E y (E z/{y}) ([] | [])",
    "E x A y (E z/{x}) ([] & [])",
    "A u (E v/{u}) []",
    "A x A u (E v/{u,x}) ([] | [])",
    "A u ([] & [])",
    "A x E u ([] | [])",
    "A x ((E u []) | E w [])",
];

/// `tree_corpus` plus the rule exemplars.
pub fn soundness_corpus(seed: u64, count: usize, max_depth: usize) -> Vec<PrefixTree> {
    let mut out = tree_corpus(seed, count, max_depth);
    out.extend(
        RULE_EXEMPLARS
            .iter()
            .map(|s| crate::syntax::parse_tree(s).expect("exemplars parse")),
    );
    out
}

/// A random NNF IF formula whose free variables lie in `scope`.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    sig: &SignatureSpec,
    scope: &mut Vec<String>,
    depth: usize,
) -> Formula {
    let pool = |scope: &[String]| -> Vec<Term> {
        scope
            .iter()
            .map(|v| Term::Var(v.clone()))
            .chain(sig.constants.iter().map(|c| Term::Const(c.clone())))
            .collect()
    };
    let roll = if depth == 0 {
        99
    } else {
        rng.gen_range(0..100)
    };
    let fresh: Vec<&str> = NAMES
        .iter()
        .copied()
        .filter(|n| !scope.iter().any(|s| s == n))
        .collect();
    if roll < 40 && !fresh.is_empty() {
        let var = fresh.choose(rng).expect("nonempty").to_string();
        let slash: VarSet = scope
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        let kind = if rng.gen_bool(0.5) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        scope.push(var.clone());
        let body = random_formula(rng, sig, scope, depth - 1);
        scope.pop();
        Formula::Quant {
            kind,
            var,
            slash,
            body: Box::new(body),
        }
    } else if roll < 75 {
        let op = if rng.gen_bool(0.5) {
            Connective::And
        } else {
            Connective::Or
        };
        let l = random_formula(rng, sig, scope, depth - 1);
        let r = random_formula(rng, sig, scope, depth - 1);
        Formula::Conn(op, Box::new(l), Box::new(r))
    } else {
        let p = pool(scope);
        if p.is_empty() {
            Formula::eq("x", "x")
        } else {
            Formula::Lit(random_literal(rng, &p, sig))
        }
    }
}

pub fn random_structure(rng: &mut ChaCha8Rng, sig: &SignatureSpec, n: u32) -> Structure {
    let mut m = Structure::new(n);
    for (name, &k) in &sig.relations {
        let tuples = all_tuples(n, k).into_iter().filter(|_| rng.gen_bool(0.5));
        m.relations
            .insert(name.clone(), Relation::with_tuples(k, tuples));
    }
    for c in &sig.constants {
        m.constants.insert(c.clone(), rng.gen_range(0..n));
    }
    m
}

/// Sentences built from corpus trees and weak completions.
pub fn sentence_corpus(seed: u64, count: usize, sig: &SignatureSpec) -> Result<Vec<Formula>> {
    let trees = tree_corpus(seed, count, 4);
    let mut out = Vec::with_capacity(count);
    for (i, t) in trees.iter().enumerate() {
        let e = weak_completions(t, sig, 1, seed ^ (i as u64) << 8)?;
        out.push(complete(t, &e[0])?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Rule soundness

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessCounterexample {
    pub tree: String,
    pub locator: Locator,
    pub rewritten: String,
    pub before: String,
    pub after: String,
    pub structure: Structure,
    pub before_value: TruthValue,
    pub after_value: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub rule: RuleId,
    pub complexity_note: Option<ComplexityNote>,
    pub cases: usize,
    pub completions: usize,
    pub evaluations: u64,
    pub max_n: u32,
    pub counterexamples: Vec<SoundnessCounterexample>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Positions of `t` where `rule` applies with default parameters.
pub fn applicable_sites(t: &PrefixTree, rule: RuleId) -> Vec<Locator> {
    let mut locs = Vec::new();
    t.walk(&mut |l, _| locs.push(l.clone()));
    locs.into_iter()
        .filter(|l| apply_rule(t, rule, l, &RuleParams::default()).is_ok())
        .collect()
}

/// Every (tree, site) pair of the corpus where `rule` applies.
pub fn rule_corpus(trees: &[PrefixTree], rule: RuleId) -> Vec<(PrefixTree, Locator)> {
    trees
        .iter()
        .flat_map(|t| {
            applicable_sites(t, rule)
                .into_iter()
                .map(move |l| (t.clone(), l))
        })
        .collect()
}

/// Compares `t` under `e` with the rewritten tree under the transported
/// completion on every structure up to `max_n`. Truth must agree; the
/// full three-valued verdict must agree for complexity-preserving steps.
fn compare_step(
    t: &PrefixTree,
    applied: &Applied,
    e: &Completion,
    sig: &SignatureSpec,
    max_n: u32,
    evaluations: &mut u64,
) -> Result<Option<SoundnessCounterexample>> {
    let before = complete(t, e)?;
    let e2 = transport_completion(t, &applied.step, e);
    let after = complete(&applied.tree, &e2)?;
    let mode = match applied.step.complexity_note {
        ComplexityNote::PreservesC => EquivalenceMode::StronglyEquivalent,
        ComplexityNote::WeakReductionOnly => EquivalenceMode::TruthEquivalent,
    };
    let report = equivalent_bounded(&before, &after, sig, max_n, mode)?;
    *evaluations += report.structures_checked;
    Ok(match report.verdict {
        EquivalenceVerdict::Equal => None,
        EquivalenceVerdict::Counterexample {
            structure,
            left,
            right,
        } => Some(SoundnessCounterexample {
            tree: t.to_string(),
            locator: applied.step.locator.clone(),
            rewritten: applied.tree.to_string(),
            before: before.to_string(),
            after: after.to_string(),
            structure,
            before_value: left,
            after_value: right,
        }),
    })
}

/// Soundness sweep with an arbitrary rule applicator (so broken rules can
/// be fed in to check that the sweep notices).
pub fn check_soundness_with<F>(
    rule: RuleId,
    corpus: &[(PrefixTree, Locator)],
    completions_per_tree: usize,
    sig: &SignatureSpec,
    max_n: u32,
    apply: F,
) -> Result<SoundnessReport>
where
    F: Fn(&PrefixTree, &Locator) -> Result<Applied>,
{
    let mut report = SoundnessReport {
        rule,
        complexity_note: None,
        cases: corpus.len(),
        completions: 0,
        evaluations: 0,
        max_n,
        counterexamples: Vec::new(),
    };
    for (i, (t, at)) in corpus.iter().enumerate() {
        let applied = apply(t, at)?;
        report.complexity_note = Some(applied.step.complexity_note);
        for e in weak_completions(t, sig, completions_per_tree, i as u64)? {
            report.completions += 1;
            if let Some(c) = compare_step(t, &applied, &e, sig, max_n, &mut report.evaluations)? {
                report.counterexamples.push(c);
            }
        }
    }
    Ok(report)
}

pub fn check_rule_soundness(
    rule: RuleId,
    corpus: &[(PrefixTree, Locator)],
    completions_per_tree: usize,
    sig: &SignatureSpec,
    max_n: u32,
) -> Result<SoundnessReport> {
    check_soundness_with(rule, corpus, completions_per_tree, sig, max_n, |t, at| {
        apply_rule(t, rule, at, &RuleParams::default())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrenexReport {
    pub trees: usize,
    pub steps: usize,
    pub completions: usize,
    pub evaluations: u64,
    pub shape_failures: Vec<String>,
    pub counterexamples: Vec<SoundnessCounterexample>,
}

impl PrenexReport {
    pub fn passed(&self) -> bool {
        self.shape_failures.is_empty() && self.counterexamples.is_empty()
    }
}

/// Checks the prenex output shape on every tree, and truth preservation
/// of weak completions carried through the step log.
pub fn check_prenex(
    trees: &[PrefixTree],
    completions_per_tree: usize,
    sig: &SignatureSpec,
    max_n: u32,
) -> Result<PrenexReport> {
    let mut report = PrenexReport {
        trees: trees.len(),
        steps: 0,
        completions: 0,
        evaluations: 0,
        shape_failures: Vec::new(),
        counterexamples: Vec::new(),
    };
    for (i, t) in trees.iter().enumerate() {
        let (out, steps) = prenex(t)?;
        report.steps += steps.len();
        if !out.is_prenex() || !out.is_regular() || out.gap_count() != t.gap_count() {
            report.shape_failures.push(format!("{t} ↦ {out}"));
            continue;
        }
        for e in weak_completions(t, sig, completions_per_tree, 1000 + i as u64)? {
            report.completions += 1;
            let mut cur = t.clone();
            let mut ce = e.clone();
            for s in &steps {
                let next = apply_rule(&cur, s.rule, &s.locator, &s.params)?;
                ce = transport_completion(&cur, &next.step, &ce);
                cur = next.tree;
            }
            let before = complete(t, &e)?;
            let after = complete(&out, &ce)?;
            let r = equivalent_bounded(
                &before,
                &after,
                sig,
                max_n,
                EquivalenceMode::TruthEquivalent,
            )?;
            report.evaluations += r.structures_checked;
            if let EquivalenceVerdict::Counterexample {
                structure,
                left,
                right,
            } = r.verdict
            {
                report.counterexamples.push(SoundnessCounterexample {
                    tree: t.to_string(),
                    locator: Locator::root(),
                    rewritten: out.to_string(),
                    before: before.to_string(),
                    after: after.to_string(),
                    structure,
                    before_value: left,
                    after_value: right,
                });
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// Semantic properties and the engine bridge

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub triples: usize,
    pub violations: Vec<String>,
}

/// Downward closure (for ⊨ and ⊨⁻) and empty-team satisfaction on
/// `count` random (formula, structure, team) triples.
pub fn check_team_properties(
    seed: u64,
    count: usize,
    max_n: u32,
    max_team: usize,
) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = SignatureSpec::binary_two_constants();
    let team_vars = vec!["x".to_string(), "y".to_string()];
    let mut violations = Vec::new();
    for _ in 0..count {
        let n = rng.gen_range(1..=max_n);
        let m = random_structure(&mut rng, &sig, n);
        let f = random_formula(&mut rng, &sig, &mut team_vars.clone(), 4);
        let mut rows: Vec<Vec<u32>> = all_tuples(n, 2);
        rows.shuffle(&mut rng);
        rows.truncate(rng.gen_range(1..=max_team));
        let x = Team::new(team_vars.clone(), rows.clone())?;
        let empty = Team::empty(team_vars.clone());
        if !satisfies(&m, &empty, &f)? || !neg_satisfies(&m, &empty, &f)? {
            violations.push(format!("empty team fails {f}"));
        }
        let (pos, neg) = (satisfies(&m, &x, &f)?, neg_satisfies(&m, &x, &f)?);
        for mask in 0u32..(1 << rows.len()) {
            let sub = x.subteam(
                rows.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, r)| r.clone()),
            );
            if pos && !satisfies(&m, &sub, &f)? {
                violations.push(format!("⊨ not downward closed: {f}"));
            }
            if neg && !neg_satisfies(&m, &sub, &f)? {
                violations.push(format!("⊨⁻ not downward closed: {f}"));
            }
        }
    }
    Ok(PropertyReport {
        triples: count,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeDisagreement {
    pub sentence: String,
    pub structure: Structure,
    pub teams: TruthValue,
    pub skolem: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub sentences: usize,
    pub evaluations: u64,
    pub disagreements: Vec<BridgeDisagreement>,
}

/// Team truth (True) against Skolem truth on every structure up to `max_n`.
pub fn check_engine_bridge(
    sentences: &[Formula],
    sig: &SignatureSpec,
    max_n: u32,
) -> Result<BridgeReport> {
    let mut report = BridgeReport {
        sentences: sentences.len(),
        evaluations: 0,
        disagreements: Vec::new(),
    };
    for f in sentences {
        for n in 1..=max_n {
            for m in enum_structures(sig, n) {
                report.evaluations += 1;
                let t = truth_value(&m, f)?;
                let s = truth_by_skolem(&m, f)?;
                if s != (t == TruthValue::True) {
                    report.disagreements.push(BridgeDisagreement {
                        sentence: f.to_string(),
                        structure: m,
                        teams: t,
                        skolem: s,
                    });
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// Encodings

/// Clause types over variables 1, 2 naming both of them.
fn two_var_clauses() -> Vec<Vec<i32>> {
    vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]
}

/// SAT instances for the GH2∨ sentence: every ordered list of one or two
/// two-variable clauses, and every nonempty set of clause types.
pub fn sat_phi_instances() -> Vec<CnfInstance> {
    let types = two_var_clauses();
    let mut out: Vec<CnfInstance> = types
        .iter()
        .map(|c| CnfInstance::new(2, vec![c.clone()]))
        .collect();
    for a in &types {
        for b in &types {
            out.push(CnfInstance::new(2, vec![a.clone(), b.clone()]));
        }
    }
    for mask in 1u32..16 {
        let cs: Vec<Vec<i32>> = (0..4)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| types[i].clone())
            .collect();
        if cs.len() > 2 {
            out.push(CnfInstance::new(2, cs));
        }
    }
    out
}

/// SAT instances for the C2 sentence: one clause over one or two
/// variables, and every ordered pair of nonempty clauses over two.
pub fn sat_theta_instances() -> Vec<CnfInstance> {
    let mut two: Vec<Vec<i32>> = vec![vec![1], vec![-1], vec![2], vec![-2]];
    two.extend(two_var_clauses());
    let mut out = vec![
        CnfInstance::new(1, vec![vec![1]]),
        CnfInstance::new(1, vec![vec![-1]]),
    ];
    out.extend(two.iter().map(|c| CnfInstance::new(2, vec![c.clone()])));
    for a in &two {
        for b in &two {
            out.push(CnfInstance::new(2, vec![a.clone(), b.clone()]));
        }
    }
    out
}

/// Ground sets of size 1..=`max_ground` with up to three distinct blocks
/// of size ≥ 2.
pub fn set_splitting_instances(max_ground: usize) -> Vec<SetSplitInstance> {
    let mut out = Vec::new();
    for k in 1..=max_ground {
        let blocks: Vec<Vec<u32>> = (0u32..1 << k)
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (0..k as u32).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        for mask in 0u32..1 << blocks.len() {
            if mask.count_ones() <= 3 {
                out.push(SetSplitInstance {
                    ground: k,
                    blocks: (0..blocks.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| blocks[i].clone())
                        .collect(),
                });
            }
        }
    }
    out
}

fn canonical_edges(n: usize, edges: &BTreeSet<(u32, u32)>) -> Vec<(u32, u32)> {
    fn perms(n: usize) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        perms(n - 1)
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, (n - 1) as u32);
                    q
                })
            })
            .collect()
    }
    perms(n)
        .into_iter()
        .map(|p| {
            let mut e: Vec<(u32, u32)> = edges
                .iter()
                .map(|&(a, b)| {
                    let (a, b) = (p[a as usize], p[b as usize]);
                    (a.min(b), a.max(b))
                })
                .collect();
            e.sort();
            e
        })
        .min()
        .expect("at least one permutation")
}

/// One graph per isomorphism class, for 1..=`max_vertices` vertices.
pub fn graph_classes(max_vertices: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
            .collect();
        let mut seen = BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let e: BTreeSet<(u32, u32)> = (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            if seen.insert(canonical_edges(n, &e)) {
                out.push(Graph::new(n, e).expect("valid graph"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementMismatch {
    pub instance: String,
    pub oracle: bool,
    pub sentence: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub problem: Problem,
    pub instances: usize,
    pub yes_instances: usize,
    pub max_domain: u32,
    pub mismatches: Vec<AgreementMismatch>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Skolem truth of the problem's sentence on each encoded instance
/// against the brute-force oracle.
pub fn encoding_agreement(problem: Problem, instances: &[Instance]) -> Result<AgreementReport> {
    let sentence = problem.sentence();
    let budget = budget_from_env();
    let mut report = AgreementReport {
        problem,
        instances: instances.len(),
        yes_instances: 0,
        max_domain: 0,
        mismatches: Vec::new(),
    };
    for inst in instances {
        let m = encode_instance(problem, inst)?;
        report.max_domain = report.max_domain.max(m.domain);
        let oracle = oracle_solve(problem, inst)?;
        report.yes_instances += usize::from(oracle);
        let got = truth_by_skolem_with_budget(&m, &sentence, budget)?;
        if got != oracle {
            report.mismatches.push(AgreementMismatch {
                instance: format!("{inst:?}"),
                oracle,
                sentence: got,
            });
        }
    }
    Ok(report)
}

/// The instance set used for `problem` by the encodings suite.
pub fn standard_instances(problem: Problem) -> Vec<Instance> {
    match problem {
        Problem::SatGh2 => sat_phi_instances().into_iter().map(Instance::Cnf).collect(),
        Problem::SatC2 => sat_theta_instances()
            .into_iter()
            .map(Instance::Cnf)
            .collect(),
        Problem::SetSplitting => set_splitting_instances(3)
            .into_iter()
            .map(Instance::SetSplit)
            .collect(),
        Problem::TwoCol => graph_classes(4).into_iter().map(Instance::Graph).collect(),
    }
}

// ---------------------------------------------------------------------
// Classifier table

/// Named minimal trees with their expected verdict and problem.
pub const CLASSIFIER_TABLE: [(&str, VerdictKind, Option<&str>); 18] = [
    ("henkin_linear", VerdictKind::NPComplete, Some("3-COLORING")),
    ("henkin_alt", VerdictKind::NPComplete, Some("3-COLORING")),
    (
        "signalling",
        VerdictKind::NPComplete,
        Some("EXACT COVER BY 3-SETS"),
    ),
    ("gh1_and", VerdictKind::FO, None),
    ("gh2_and", VerdictKind::FO, None),
    ("gh1_or", VerdictKind::FO, None),
    ("gh2_or", VerdictKind::NPComplete, Some("SAT")),
    ("c1", VerdictKind::NPComplete, Some("SET SPLITTING")),
    ("c2", VerdictKind::NPComplete, Some("SAT")),
    ("c3", VerdictKind::NPComplete, Some("SAT")),
    ("c1p", VerdictKind::FO, None),
    ("c2p", VerdictKind::FO, None),
    ("c3p", VerdictKind::FO, None),
    ("c4p", VerdictKind::FO, None),
    ("c5p", VerdictKind::FO, None),
    ("c6p", VerdictKind::FO, None),
    ("modest_prefix", VerdictKind::FO, None),
    ("modest_branching", VerdictKind::FO, None),
];

/// Names whose verdict differs from the table.
pub fn classifier_mismatches() -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (name, kind, problem) in CLASSIFIER_TABLE {
        let t = named_tree(name).ok_or_else(|| Error::Input(format!("no tree `{name}`")))?;
        let v = classify(&t)?;
        if v.verdict != kind || v.problem.as_deref() != problem {
            out.push(format!("{name}: got {:?} {:?}", v.verdict, v.problem));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Semantics,
    Rules,
    Encodings,
    Classifier,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semantics" => Ok(Suite::Semantics),
            "rules" => Ok(Suite::Rules),
            "encodings" => Ok(Suite::Encodings),
            "classifier" => Ok(Suite::Classifier),
            _ => Err(Error::Input(format!("unknown suite `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_size: u32,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Result<CheckResult> {
    let start = Instant::now();
    let (passed, detail) = f()?;
    Ok(CheckResult {
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Size bound used when `verify` gets no `--max-size`.
pub fn default_max_size(suite: Suite) -> u32 {
    match suite {
        Suite::Encodings => 8,
        _ => 3,
    }
}

/// Runs a suite. `max_size` bounds structure sizes for semantics and
/// rules, and the encoded domain size for encodings.
pub fn run_suite(suite: Suite, max_size: u32, seed: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    match suite {
        Suite::Semantics => {
            checks.push(timed("team properties", || {
                let r = check_team_properties(seed, 1000, max_size, 4)?;
                Ok((
                    r.violations.is_empty(),
                    format!("{} triples, {} violations", r.triples, r.violations.len()),
                ))
            })?);
            checks.push(timed("engine bridge", || {
                let sig = SignatureSpec::binary_two_constants();
                let r = check_engine_bridge(&sentence_corpus(seed, 50, &sig)?, &sig, max_size)?;
                Ok((
                    r.disagreements.is_empty(),
                    format!(
                        "{} evaluations, {} disagreements",
                        r.evaluations,
                        r.disagreements.len()
                    ),
                ))
            })?);
        }
        Suite::Rules => {
            let sig = SignatureSpec::binary();
            let trees = soundness_corpus(seed, 24, 5);
            for rule in RuleId::ALL {
                checks.push(timed(rule.name(), || {
                    let corpus = rule_corpus(&trees, rule);
                    let r = check_rule_soundness(rule, &corpus, 3, &sig, max_size)?;
                    Ok((
                        r.passed(),
                        format!(
                            "{} sites, {} completions, {} counterexamples",
                            r.cases,
                            r.completions,
                            r.counterexamples.len()
                        ),
                    ))
                })?);
            }
            checks.push(timed("prenex", || {
                let r = check_prenex(&trees, 3, &sig, max_size)?;
                Ok((
                    r.passed(),
                    format!(
                        "{} trees, {} shape failures, {} counterexamples",
                        r.trees,
                        r.shape_failures.len(),
                        r.counterexamples.len()
                    ),
                ))
            })?);
        }
        Suite::Encodings => {
            for problem in Problem::ALL {
                checks.push(timed(problem.name(), || {
                    let mut insts = Vec::new();
                    for i in standard_instances(problem) {
                        if encode_instance(problem, &i)?.domain <= max_size {
                            insts.push(i);
                        }
                    }
                    let r = encoding_agreement(problem, &insts)?;
                    Ok((
                        r.passed(),
                        format!(
                            "{} instances ({} yes), {} mismatches",
                            r.instances,
                            r.yes_instances,
                            r.mismatches.len()
                        ),
                    ))
                })?);
            }
        }
        Suite::Classifier => {
            checks.push(timed("named trees", || {
                let bad = classifier_mismatches()?;
                Ok((
                    bad.is_empty(),
                    if bad.is_empty() {
                        "all match".into()
                    } else {
                        bad.join("; ")
                    },
                ))
            })?);
        }
    }
    Ok(SuiteReport {
        suite,
        max_size,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
