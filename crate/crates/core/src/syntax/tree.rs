use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ast::{Atom, Connective, Formula, Literal, Quantifier, Regularity, VarSet};
use crate::error::{Error, Result};

/// Root-to-node child indices. Quantifier child is 0; connective children
/// are 0 (left) and 1 (right).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Locator(pub Vec<usize>);

impl Locator {
    pub fn root() -> Self {
        Locator(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Locator(v)
    }

    pub fn parent(&self) -> Option<Self> {
        let mut v = self.0.clone();
        v.pop().map(|_| Locator(v))
    }

    pub fn is_ancestor_of(&self, other: &Locator) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl FromStr for Locator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "root" || s == "." {
            return Ok(Locator::root());
        }
        s.split('.')
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::Input(format!("bad locator component `{p}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Locator)
    }
}

impl Serialize for Locator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Locator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Positive initial tree in hat form: every connective has two slots and
/// every quantifier one; empty slots are gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrefixTree {
    Quant {
        kind: Quantifier,
        var: String,
        slash: VarSet,
        child: Box<PrefixTree>,
    },
    Conn {
        op: Connective,
        left: Box<PrefixTree>,
        right: Box<PrefixTree>,
    },
    Gap(usize),
}

/// A quantifier occurrence in a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantNode {
    pub loc: Locator,
    pub kind: Quantifier,
    pub var: String,
    pub slash: VarSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathStep {
    pub loc: Locator,
    pub node: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub gap: usize,
    pub steps: Vec<PathStep>,
    pub bound: VarSet,
}

pub type Completion = BTreeMap<usize, Formula>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionFlags {
    pub weak: bool,
    pub sentential: bool,
    pub regularity_preserving: bool,
    pub nice: bool,
}

impl PrefixTree {
    pub fn gap() -> Self {
        PrefixTree::Gap(0)
    }

    pub fn quant(kind: Quantifier, var: &str, slash: &[&str], child: PrefixTree) -> Self {
        PrefixTree::Quant {
            kind,
            var: var.to_string(),
            slash: slash.iter().map(|s| s.to_string()).collect(),
            child: Box::new(child),
        }
    }

    pub fn conn(op: Connective, left: PrefixTree, right: PrefixTree) -> Self {
        PrefixTree::Conn {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Reassign gap ids 0..k-1 left to right.
    pub fn renumbered(mut self) -> Self {
        fn go(t: &mut PrefixTree, next: &mut usize) {
            match t {
                PrefixTree::Gap(i) => {
                    *i = *next;
                    *next += 1;
                }
                PrefixTree::Quant { child, .. } => go(child, next),
                PrefixTree::Conn { left, right, .. } => {
                    go(left, next);
                    go(right, next);
                }
            }
        }
        go(&mut self, &mut 0);
        self
    }

    pub fn gap_count(&self) -> usize {
        match self {
            PrefixTree::Gap(_) => 1,
            PrefixTree::Quant { child, .. } => child.gap_count(),
            PrefixTree::Conn { left, right, .. } => left.gap_count() + right.gap_count(),
        }
    }

    /// Gap ids in left-to-right order.
    pub fn gap_ids(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |_, t| {
            if let PrefixTree::Gap(i) = t {
                out.push(*i);
            }
        });
        out
    }

    pub fn children(&self) -> Vec<&PrefixTree> {
        match self {
            PrefixTree::Gap(_) => vec![],
            PrefixTree::Quant { child, .. } => vec![child],
            PrefixTree::Conn { left, right, .. } => vec![left, right],
        }
    }

    /// Preorder walk with locators.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&Locator, &'a PrefixTree)) {
        fn go<'a>(
            t: &'a PrefixTree,
            loc: &mut Vec<usize>,
            f: &mut impl FnMut(&Locator, &'a PrefixTree),
        ) {
            f(&Locator(loc.clone()), t);
            for (i, c) in t.children().into_iter().enumerate() {
                loc.push(i);
                go(c, loc, f);
                loc.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn at(&self, loc: &Locator) -> Option<&PrefixTree> {
        let mut t = self;
        for &i in &loc.0 {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    pub fn at_mut(&mut self, loc: &Locator) -> Option<&mut PrefixTree> {
        let mut t = self;
        for &i in &loc.0 {
            t = match (t, i) {
                (PrefixTree::Quant { child, .. }, 0) => child,
                (PrefixTree::Conn { left, .. }, 0) => left,
                (PrefixTree::Conn { right, .. }, 1) => right,
                _ => return None,
            };
        }
        Some(t)
    }

    pub fn quantifiers(&self) -> Vec<QuantNode> {
        let mut out = Vec::new();
        self.walk(&mut |loc, t| {
            if let PrefixTree::Quant {
                kind, var, slash, ..
            } = t
            {
                out.push(QuantNode {
                    loc: loc.clone(),
                    kind: *kind,
                    var: var.clone(),
                    slash: slash.clone(),
                });
            }
        });
        out
    }

    pub fn connectives(&self) -> Vec<(Locator, Connective)> {
        let mut out = Vec::new();
        self.walk(&mut |loc, t| {
            if let PrefixTree::Conn { op, .. } = t {
                out.push((loc.clone(), *op));
            }
        });
        out
    }

    pub fn has_connective(&self, op: Connective) -> bool {
        self.connectives().iter().any(|(_, c)| *c == op)
    }

    pub fn bound_vars(&self) -> VarSet {
        self.quantifiers().into_iter().map(|q| q.var).collect()
    }

    /// No connective lies above any quantifier.
    pub fn is_prenex(&self) -> bool {
        match self {
            PrefixTree::Gap(_) => true,
            PrefixTree::Quant { child, .. } => child.is_prenex(),
            PrefixTree::Conn { left, right, .. } => {
                left.quantifiers().is_empty() && right.quantifiers().is_empty()
            }
        }
    }

    /// The tree read as a formula whose gaps are 0-ary placeholder atoms.
    pub fn to_skeleton_formula(&self) -> Formula {
        match self {
            PrefixTree::Gap(i) => Formula::Lit(Literal {
                positive: true,
                atom: Atom::Rel {
                    name: format!("__gap{i}"),
                    args: vec![],
                },
            }),
            PrefixTree::Quant {
                kind,
                var,
                slash,
                child,
            } => Formula::Quant {
                kind: *kind,
                var: var.clone(),
                slash: slash.clone(),
                body: Box::new(child.to_skeleton_formula()),
            },
            PrefixTree::Conn { op, left, right } => Formula::Conn(
                *op,
                Box::new(left.to_skeleton_formula()),
                Box::new(right.to_skeleton_formula()),
            ),
        }
    }

    pub fn free_vars(&self) -> VarSet {
        self.to_skeleton_formula().free_vars()
    }

    pub fn regularity(&self) -> Regularity {
        self.to_skeleton_formula().regularity()
    }

    pub fn is_regular(&self) -> bool {
        self.regularity().regular
    }

    pub fn paths(&self) -> Vec<Path> {
        fn go(
            t: &PrefixTree,
            loc: &mut Vec<usize>,
            steps: &mut Vec<PathStep>,
            bound: &mut Vec<String>,
            out: &mut Vec<Path>,
        ) {
            if let PrefixTree::Gap(i) = t {
                out.push(Path {
                    gap: *i,
                    steps: steps.clone(),
                    bound: bound.iter().cloned().collect(),
                });
                return;
            }
            steps.push(PathStep {
                loc: Locator(loc.clone()),
                node: t.node_label(),
            });
            let pushed = if let PrefixTree::Quant { var, .. } = t {
                bound.push(var.clone());
                true
            } else {
                false
            };
            for (i, c) in t.children().into_iter().enumerate() {
                loc.push(i);
                go(c, loc, steps, bound, out);
                loc.pop();
            }
            if pushed {
                bound.pop();
            }
            steps.pop();
        }
        let mut out = Vec::new();
        go(
            self,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut Vec::new(),
            &mut out,
        );
        out.sort_by_key(|p| p.gap);
        out
    }

    /// Short description of a single node: `A x/{y}`, `|`, `[]`.
    pub fn node_label(&self) -> String {
        match self {
            PrefixTree::Gap(_) => "[]".into(),
            PrefixTree::Conn { op, .. } => op.symbol().into(),
            PrefixTree::Quant {
                kind, var, slash, ..
            } => {
                if slash.is_empty() {
                    format!("{} {}", kind.symbol(), var)
                } else {
                    let s: Vec<&str> = slash.iter().map(String::as_str).collect();
                    format!("{} {}/{{{}}}", kind.symbol(), var, s.join(","))
                }
            }
        }
    }

    /// Variables bound on the path from the root to `loc` (exclusive).
    pub fn bound_above(&self, loc: &Locator) -> Vec<(Quantifier, String, Locator)> {
        let mut out = Vec::new();
        let mut t = self;
        let mut cur = Locator::root();
        for &i in &loc.0 {
            if let PrefixTree::Quant { kind, var, .. } = t {
                out.push((*kind, var.clone(), cur.clone()));
            }
            match t.children().get(i) {
                Some(c) => t = c,
                None => break,
            }
            cur = cur.child(i);
        }
        out
    }
}

fn cut(f: &Formula, at_qfree: bool) -> PrefixTree {
    if at_qfree && f.is_quantifier_free() {
        return PrefixTree::Gap(0);
    }
    match f {
        Formula::Lit(_) | Formula::Neg(_) => PrefixTree::Gap(0),
        Formula::Conn(op, l, r) => PrefixTree::conn(*op, cut(l, at_qfree), cut(r, at_qfree)),
        Formula::Quant {
            kind,
            var,
            slash,
            body,
        } => PrefixTree::Quant {
            kind: *kind,
            var: var.clone(),
            slash: slash.clone(),
            child: Box::new(cut(body, at_qfree)),
        },
    }
}

/// Positive initial tree of `f`, cut at atoms, negations and maximal
/// quantifier-free subformulas.
pub fn prefix_tree(f: &Formula) -> PrefixTree {
    cut(f, true).renumbered()
}

/// Positive initial tree cut only at atoms and negations.
pub fn maximal_prefix_tree(f: &Formula) -> PrefixTree {
    cut(f, false).renumbered()
}

/// ê(T): attach `e(gap)` at every gap.
pub fn complete(t: &PrefixTree, e: &Completion) -> Result<Formula> {
    match t {
        PrefixTree::Gap(i) => {
            let f = e.get(i).ok_or(Error::MissingGap(*i))?;
            if !f.is_regular() {
                return Err(Error::Irregular(format!("completion of gap {i}")));
            }
            Ok(f.clone())
        }
        PrefixTree::Quant {
            kind,
            var,
            slash,
            child,
        } => Ok(Formula::Quant {
            kind: *kind,
            var: var.clone(),
            slash: slash.clone(),
            body: Box::new(complete(child, e)?),
        }),
        PrefixTree::Conn { op, left, right } => Ok(Formula::Conn(
            *op,
            Box::new(complete(left, e)?),
            Box::new(complete(right, e)?),
        )),
    }
}

pub fn completion_flags(t: &PrefixTree, e: &Completion) -> Result<CompletionFlags> {
    let mut flags = CompletionFlags {
        weak: true,
        sentential: true,
        regularity_preserving: true,
        nice: true,
    };
    for p in t.paths() {
        let f = e.get(&p.gap).ok_or(Error::MissingGap(p.gap))?;
        flags.weak &= f.is_quantifier_free();
        flags.sentential &= f.free_vars().is_subset(&p.bound);
        flags.regularity_preserving &= f.bound_vars().is_disjoint(&p.bound);
    }
    flags.nice = flags.sentential && flags.regularity_preserving;
    Ok(flags)
}
