//! Locator-addressed rewrite rules on positive initial trees, and the
//! strong-regularization and prenex procedures built from them.
//!
//! Every rule keeps the left-to-right order of gaps, so the induced path
//! bijection is the identity; it is still returned with each step.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{
    maximal_prefix_tree, slash_all, slash_nonempty, subst, Completion, Connective, Formula,
    Locator, PrefixTree, Quantifier, VarSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    Rename,
    ExtractWeak,
    ExtractStrong,
    Distribute,
    Swap,
    DropExSlash,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::Rename,
        RuleId::ExtractWeak,
        RuleId::ExtractStrong,
        RuleId::Distribute,
        RuleId::Swap,
        RuleId::DropExSlash,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Rename => "rename",
            RuleId::ExtractWeak => "extract-weak",
            RuleId::ExtractStrong => "extract-strong",
            RuleId::Distribute => "distribute",
            RuleId::Swap => "swap",
            RuleId::DropExSlash => "drop-ex-slash",
        }
    }

    pub fn complexity_note(self) -> ComplexityNote {
        match self {
            RuleId::ExtractWeak | RuleId::ExtractStrong => ComplexityNote::WeakReductionOnly,
            _ => ComplexityNote::PreservesC,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown rule `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexityNote {
    #[serde(rename = "preserves_C")]
    PreservesC,
    #[serde(rename = "weak_reduction_only")]
    WeakReductionOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Input(format!("unknown side `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleParams {
    /// Rename: the new variable (fresh if absent).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub new_var: Option<String>,
    /// Extraction: which child quantifier moves up.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub side: Option<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: RuleId,
    pub locator: Locator,
    pub params: RuleParams,
    pub before: String,
    pub after: String,
    pub complexity_note: ComplexityNote,
    /// Old gap id → new gap id.
    pub iota: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Applied {
    pub tree: PrefixTree,
    pub iota: Vec<usize>,
    pub step: RewriteStep,
}

fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

fn side_condition(msg: impl Into<String>) -> Error {
    Error::SideCondition(msg.into())
}

/// Applies `f` to the tree read as a formula whose gaps are placeholders.
fn via_skeleton(t: &PrefixTree, f: impl Fn(&Formula) -> Formula) -> PrefixTree {
    maximal_prefix_tree(&f(&t.to_skeleton_formula()))
}

/// Variables quantified or slashed anywhere in `t`.
pub fn occurring_vars(t: &PrefixTree) -> VarSet {
    let mut out = BTreeSet::new();
    for q in t.quantifiers() {
        out.insert(q.var);
        out.extend(q.slash);
    }
    out
}

/// `base` stripped of trailing digits, plus the lowest numeric suffix
/// not in `taken`.
pub fn fresh_var(base: &str, taken: &VarSet) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|v| !taken.contains(v))
        .expect("unbounded suffixes")
}

pub fn apply_rule(
    t: &PrefixTree,
    rule: RuleId,
    at: &Locator,
    params: &RuleParams,
) -> Result<Applied> {
    if !t.is_regular() {
        return Err(Error::Irregular(format!("tree `{t}` is not regular")));
    }
    let node = t
        .at(at)
        .ok_or_else(|| shape(format!("no node at locator {at}")))?
        .clone();
    let mut params = params.clone();
    let replacement = match rule {
        RuleId::Rename => rename(t, &node, &mut params)?,
        RuleId::ExtractWeak | RuleId::ExtractStrong => extract(&node, rule, &mut params)?,
        RuleId::Distribute => distribute(&node)?,
        RuleId::Swap => swap(&node)?,
        RuleId::DropExSlash => drop_ex_slash(t, at, &node)?,
    };
    let mut out = t.clone();
    *out.at_mut(at).expect("locator checked") = replacement;
    let out = out.renumbered();
    if !out.is_regular() {
        return Err(side_condition("the result would not be regular"));
    }
    let iota: Vec<usize> = (0..t.gap_count()).collect();
    let step = RewriteStep {
        rule,
        locator: at.clone(),
        params,
        before: t.to_string(),
        after: out.to_string(),
        complexity_note: rule.complexity_note(),
        iota: iota.clone(),
    };
    Ok(Applied {
        tree: out,
        iota,
        step,
    })
}

fn rename(t: &PrefixTree, node: &PrefixTree, params: &mut RuleParams) -> Result<PrefixTree> {
    let PrefixTree::Quant {
        kind,
        var,
        slash,
        child,
    } = node
    else {
        return Err(shape("rename addresses a quantifier"));
    };
    let v = match &params.new_var {
        Some(v) => v.clone(),
        None => fresh_var(var, &occurring_vars(t)),
    };
    params.new_var = Some(v.clone());
    if &v == var {
        return Err(side_condition(
            "the new variable must differ from the old one",
        ));
    }
    if occurring_vars(node).contains(&v) {
        return Err(side_condition(format!(
            "`{v}` occurs in the renamed subtree"
        )));
    }
    if slash.contains(var) {
        return Err(side_condition(format!(
            "`{var}` occurs in its own slash set"
        )));
    }
    let body = via_skeleton(child, |f| subst(f, var, &v));
    Ok(PrefixTree::Quant {
        kind: *kind,
        var: v,
        slash: slash.clone(),
        child: Box::new(body),
    })
}

fn extract(node: &PrefixTree, rule: RuleId, params: &mut RuleParams) -> Result<PrefixTree> {
    let PrefixTree::Conn { op, left, right } = node else {
        return Err(shape("extraction addresses a connective"));
    };
    let side = match params.side {
        Some(s) => s,
        None if matches!(**left, PrefixTree::Quant { .. }) => Side::Left,
        None => Side::Right,
    };
    params.side = Some(side);
    let (quant, sibling) = match side {
        Side::Left => (left, right),
        Side::Right => (right, left),
    };
    let PrefixTree::Quant {
        kind,
        var,
        slash,
        child,
    } = quant.as_ref()
    else {
        return Err(shape(
            format!("the {side:?} child is not a quantifier").to_lowercase(),
        ));
    };
    if slash.contains(var) {
        return Err(side_condition(format!(
            "`{var}` occurs in its own slash set"
        )));
    }
    if occurring_vars(sibling).contains(var) {
        return Err(side_condition(format!(
            "`{var}` occurs in the sibling subtree"
        )));
    }
    let adjusted = match rule {
        RuleId::ExtractWeak => via_skeleton(sibling, |f| slash_all(f, var)),
        _ => via_skeleton(sibling, |f| slash_nonempty(f, var)),
    };
    let (l, r) = match side {
        Side::Left => (child.as_ref().clone(), adjusted),
        Side::Right => (adjusted, child.as_ref().clone()),
    };
    Ok(PrefixTree::Quant {
        kind: *kind,
        var: var.clone(),
        slash: slash.clone(),
        child: Box::new(PrefixTree::conn(*op, l, r)),
    })
}

fn distribute(node: &PrefixTree) -> Result<PrefixTree> {
    let PrefixTree::Quant {
        kind,
        var,
        slash,
        child,
    } = node
    else {
        return Err(shape("distribution addresses a quantifier"));
    };
    let PrefixTree::Conn { op, left, right } = child.as_ref() else {
        return Err(shape(
            "distribution needs a connective right below the quantifier",
        ));
    };
    if !slash.is_empty() {
        return Err(side_condition(
            "the distributed quantifier must have an empty slash set",
        ));
    }
    match (kind, op) {
        (Quantifier::Forall, Connective::And) | (Quantifier::Exists, Connective::Or) => {}
        _ => return Err(side_condition("only ∀ over ∧ and ∃ over ∨ distribute")),
    }
    let q = |c: &PrefixTree| PrefixTree::Quant {
        kind: *kind,
        var: var.clone(),
        slash: VarSet::new(),
        child: Box::new(c.clone()),
    };
    Ok(PrefixTree::conn(*op, q(left), q(right)))
}

fn swap(node: &PrefixTree) -> Result<PrefixTree> {
    let PrefixTree::Quant {
        kind: k1,
        var: u,
        slash: us,
        child,
    } = node
    else {
        return Err(shape("swap addresses the upper of two quantifiers"));
    };
    let PrefixTree::Quant {
        kind: k2,
        var: v,
        slash: vs,
        child: body,
    } = child.as_ref()
    else {
        return Err(shape(
            "swap needs a quantifier right below the addressed one",
        ));
    };
    if !vs.contains(u) {
        return Err(side_condition(format!(
            "`{u}` must be in the slash set of the lower quantifier"
        )));
    }
    let mut inner_slash = us.clone();
    inner_slash.insert(v.clone());
    let mut outer_slash = vs.clone();
    outer_slash.remove(u);
    Ok(PrefixTree::Quant {
        kind: *k2,
        var: v.clone(),
        slash: outer_slash,
        child: Box::new(PrefixTree::Quant {
            kind: *k1,
            var: u.clone(),
            slash: inner_slash,
            child: body.clone(),
        }),
    })
}

fn drop_ex_slash(t: &PrefixTree, at: &Locator, node: &PrefixTree) -> Result<PrefixTree> {
    let PrefixTree::Quant {
        kind: Quantifier::Exists,
        var,
        slash,
        child,
    } = node
    else {
        return Err(shape("slash dropping addresses an existential quantifier"));
    };
    if slash.is_empty() {
        return Err(shape("the slash set is already empty"));
    }
    let above = t.bound_above(at);
    for s in slash {
        let existential = above
            .iter()
            .any(|(k, v, _)| v == s && *k == Quantifier::Exists);
        if !existential {
            return Err(side_condition(format!(
                "`{s}` is not existentially quantified above"
            )));
        }
    }
    Ok(PrefixTree::Quant {
        kind: Quantifier::Exists,
        var: var.clone(),
        slash: VarSet::new(),
        child: child.clone(),
    })
}

/// Carries a completion of the tree before `step` to the tree after it.
/// Only renaming changes the formulas: gaps below the renamed quantifier
/// get `Subst(e, u, v)`.
pub fn transport_completion(before: &PrefixTree, step: &RewriteStep, e: &Completion) -> Completion {
    let mut out: Completion = e
        .iter()
        .map(|(g, f)| (step.iota.get(*g).copied().unwrap_or(*g), f.clone()))
        .collect();
    if step.rule != RuleId::Rename {
        return out;
    }
    let Some(PrefixTree::Quant { var, .. }) = before.at(&step.locator) else {
        return out;
    };
    let v = step
        .params
        .new_var
        .as_deref()
        .expect("rename records its variable");
    let below = gaps_below(before, &step.locator);
    for g in below {
        let g2 = step.iota[g];
        if let Some(f) = out.get(&g2) {
            out.insert(g2, subst(f, var, v));
        }
    }
    out
}

/// Gap ids inside the subtree at `loc`.
pub fn gaps_below(t: &PrefixTree, loc: &Locator) -> Vec<usize> {
    let mut out = Vec::new();
    t.walk(&mut |l, n| {
        if let PrefixTree::Gap(i) = n {
            if loc == l || loc.is_ancestor_of(l) {
                out.push(*i);
            }
        }
    });
    out
}

pub fn strong_regularize(t: &PrefixTree) -> Result<(PrefixTree, Vec<RewriteStep>)> {
    if !t.is_regular() {
        return Err(Error::Irregular(format!("tree `{t}` is not regular")));
    }
    let mut cur = t.clone();
    let mut steps = Vec::new();
    loop {
        let qs = cur.quantifiers();
        let mut count = std::collections::BTreeMap::<&str, usize>::new();
        for q in &qs {
            *count.entry(q.var.as_str()).or_default() += 1;
        }
        // Deepest duplicated occurrence; ties go to the later one in preorder.
        let target = qs
            .iter()
            .enumerate()
            .filter(|(_, q)| count[q.var.as_str()] > 1)
            .max_by_key(|(i, q)| (q.loc.depth(), *i))
            .map(|(_, q)| q.loc.clone());
        let Some(loc) = target else {
            return Ok((cur, steps));
        };
        let a = apply_rule(&cur, RuleId::Rename, &loc, &RuleParams::default())?;
        cur = a.tree;
        steps.push(a.step);
    }
}

/// Strong regularization, then weak extraction at the shallowest
/// connective with a quantifier child until the tree is prenex.
pub fn prenex(t: &PrefixTree) -> Result<(PrefixTree, Vec<RewriteStep>)> {
    let (mut cur, mut steps) = strong_regularize(t)?;
    loop {
        let mut best: Option<(usize, Locator, Side)> = None;
        cur.walk(&mut |loc, n| {
            if let PrefixTree::Conn { left, right, .. } = n {
                let side = if matches!(**left, PrefixTree::Quant { .. }) {
                    Some(Side::Left)
                } else if matches!(**right, PrefixTree::Quant { .. }) {
                    Some(Side::Right)
                } else {
                    None
                };
                if let Some(side) = side {
                    if best.as_ref().is_none_or(|(d, _, _)| loc.depth() < *d) {
                        best = Some((loc.depth(), loc.clone(), side));
                    }
                }
            }
        });
        let Some((_, loc, side)) = best else {
            debug_assert!(cur.is_prenex());
            return Ok((cur, steps));
        };
        let params = RuleParams {
            side: Some(side),
            ..RuleParams::default()
        };
        let a = apply_rule(&cur, RuleId::ExtractWeak, &loc, &params)?;
        cur = a.tree;
        steps.push(a.step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_tree};

    fn t(s: &str) -> PrefixTree {
        parse_tree(s).unwrap()
    }

    fn apply(s: &str, rule: RuleId, at: &str) -> Result<PrefixTree> {
        apply_rule(&t(s), rule, &at.parse().unwrap(), &RuleParams::default()).map(|a| a.tree)
    }

    #[test]
    fn rule_examples() {
        assert_eq!(
            apply("A u (E v/{u}) []", RuleId::Swap, "root").unwrap(),
            t("E v (A u/{v}) []")
        );
        assert_eq!(
            apply("A u ([] & [])", RuleId::Distribute, "root").unwrap(),
            t("(A u []) & (A u [])")
        );
        assert_eq!(
            apply("E x (E y/{x}) []", RuleId::DropExSlash, "0").unwrap(),
            t("E x E y []")
        );
        assert_eq!(
            apply("A x ((E u []) | [])", RuleId::ExtractWeak, "0").unwrap(),
            t("A x E u ([] | [])")
        );
        assert_eq!(
            apply("A x ((E u []) | E w [])", RuleId::ExtractWeak, "0").unwrap(),
            t("A x E u ([] | (E w/{u}) [])")
        );
        assert_eq!(
            apply("A x ((E u []) | E w [])", RuleId::ExtractStrong, "0").unwrap(),
            t("A x E u ([] | E w [])")
        );
        assert_eq!(
            apply("A x ([] | (E u/{x}) [])", RuleId::ExtractWeak, "0").unwrap(),
            t("A x (E u/{x}) ([] | [])")
        );
    }

    #[test]
    fn side_conditions() {
        assert!(matches!(
            apply("A u ([] | [])", RuleId::Distribute, "root"),
            Err(Error::SideCondition(_))
        ));
        assert!(matches!(
            apply("A u E v []", RuleId::Swap, "root"),
            Err(Error::SideCondition(_))
        ));
        assert!(matches!(
            apply("A x (E y/{x}) []", RuleId::DropExSlash, "0"),
            Err(Error::SideCondition(_))
        ));
        assert!(matches!(
            apply("A x ((E u []) | (E w/{u}) [])", RuleId::ExtractWeak, "0"),
            Err(Error::Irregular(_)) | Err(Error::SideCondition(_))
        ));
        assert!(matches!(
            apply("A x E y []", RuleId::Distribute, "0.0"),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            apply("A x E y []", RuleId::Swap, "1"),
            Err(Error::Shape(_))
        ));
        let p = RuleParams {
            new_var: Some("y".into()),
            side: None,
        };
        assert!(apply_rule(
            &t("A x A u (E y/{u}) []"),
            RuleId::Rename,
            &"0".parse().unwrap(),
            &p
        )
        .is_err());
    }

    #[test]
    fn rename_substitutes_slashes() {
        let a = apply("A u (E w/{u}) []", RuleId::Rename, "root").unwrap();
        assert_eq!(a, t("A u1 (E w/{u1}) []"));
    }

    #[test]
    fn strong_regularization() {
        let (out, steps) = strong_regularize(&t("A x E y []")).unwrap();
        assert!(steps.is_empty() && out == t("A x E y []"));
        let (out, steps) = strong_regularize(&t("(A x []) | (A x [])")).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(out.regularity().strongly_regular);
        let three = t("(A x []) | ((A x []) & (A x []))");
        let (out, steps) = strong_regularize(&three).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(out.regularity().strongly_regular);
        assert_eq!(strong_regularize(&out).unwrap().0, out);
    }

    #[test]
    fn prenex_examples() {
        let (out, steps) = prenex(&t("A x ((E u []) | [])")).unwrap();
        assert_eq!(out, t("A x E u ([] | [])"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].rule, RuleId::ExtractWeak);
        let (out, steps) = prenex(&t("A x ([] & [])")).unwrap();
        assert!(steps.is_empty() && out == t("A x ([] & [])"));
        let c1 = t("A x ((A y (E u/{x}) []) | (A z (E v/{x}) []))");
        let (out, _) = prenex(&c1).unwrap();
        assert!(out.is_prenex() && out.is_regular());
        assert_eq!(out.gap_count(), 2);
    }

    #[test]
    fn transport_renames_completions() {
        let before = t("(A x []) | (A x [])");
        let (_, steps) = strong_regularize(&before).unwrap();
        let e: Completion = [
            (0, parse_formula("P(x)").unwrap()),
            (1, parse_formula("P(x)").unwrap()),
        ]
        .into();
        let e2 = transport_completion(&before, &steps[0], &e);
        assert_eq!(e2[&0], e[&0]);
        assert_eq!(e2[&1], parse_formula("P(x1)").unwrap());
    }

    #[test]
    fn step_json() {
        let a = apply_rule(
            &t("A u ([] & [])"),
            RuleId::Distribute,
            &Locator::root(),
            &RuleParams::default(),
        )
        .unwrap();
        let j = serde_json::to_value(&a.step).unwrap();
        assert_eq!(j["rule"], "distribute");
        assert_eq!(j["locator"], "root");
        assert_eq!(j["complexity_note"], "preserves_C");
    }
}
