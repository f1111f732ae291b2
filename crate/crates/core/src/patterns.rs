//! Dependence between quantifier occurrences, the Henkin / signalling /
//! generalized Henkin / coordinated patterns, the extension relation
//! between trees, and the complexity verdicts built on them.
//!
//! A quantifier `(Qy/Y)` depends on `(Q'x/X)` when the latter is strictly
//! above it and `x ∉ Y`; it depends on a connective when the connective is
//! strictly above it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{parse_tree, Connective, Locator, PrefixTree, Quantifier, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
enum NodeKind {
    Quant {
        kind: Quantifier,
        var: String,
        slash: VarSet,
    },
    Conn(Connective),
}

#[derive(Debug, Clone)]
struct Node {
    loc: Locator,
    kind: NodeKind,
}

/// Operator occurrences of a tree (gaps excluded) in preorder.
struct Index {
    nodes: Vec<Node>,
}

impl Index {
    fn new(t: &PrefixTree) -> Self {
        let mut nodes = Vec::new();
        t.walk(&mut |loc, n| match n {
            PrefixTree::Quant {
                kind, var, slash, ..
            } => nodes.push(Node {
                loc: loc.clone(),
                kind: NodeKind::Quant {
                    kind: *kind,
                    var: var.clone(),
                    slash: slash.clone(),
                },
            }),
            PrefixTree::Conn { op, .. } => nodes.push(Node {
                loc: loc.clone(),
                kind: NodeKind::Conn(*op),
            }),
            PrefixTree::Gap(_) => {}
        });
        Index { nodes }
    }

    fn find(&self, loc: &Locator) -> Option<usize> {
        self.nodes.iter().position(|n| &n.loc == loc)
    }

    fn prec(&self, a: usize, b: usize) -> bool {
        self.nodes[a].loc.is_ancestor_of(&self.nodes[b].loc)
    }

    fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.prec(a, b) || self.prec(b, a)
    }

    /// Does `b` depend on `a`?
    fn dep(&self, b: usize, a: usize) -> bool {
        if !self.prec(a, b) {
            return false;
        }
        match (&self.nodes[a].kind, &self.nodes[b].kind) {
            (NodeKind::Quant { var, .. }, NodeKind::Quant { slash, .. }) => !slash.contains(var),
            _ => true,
        }
    }

    fn quants(&self, q: Quantifier) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| matches!(self.nodes[i].kind, NodeKind::Quant { kind, .. } if kind == q))
            .collect()
    }

    fn conns(&self, op: Connective) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].kind == NodeKind::Conn(op))
            .collect()
    }

    fn op(&self, i: usize) -> Option<Connective> {
        match self.nodes[i].kind {
            NodeKind::Conn(op) => Some(op),
            _ => None,
        }
    }

    fn is_quant(&self, i: usize, q: Quantifier) -> bool {
        matches!(self.nodes[i].kind, NodeKind::Quant { kind, .. } if kind == q)
    }

    /// Lowest common ancestor of two incomparable nodes.
    fn lca(&self, a: usize, b: usize) -> Option<usize> {
        let (la, lb) = (&self.nodes[a].loc.0, &self.nodes[b].loc.0);
        let k = la.iter().zip(lb).take_while(|(x, y)| x == y).count();
        if k == la.len() || k == lb.len() {
            return None;
        }
        self.find(&Locator(la[..k].to_vec()))
    }

    fn witness(&self, roles: &[&str], ids: &[usize]) -> Witness {
        Witness {
            nodes: roles
                .iter()
                .zip(ids)
                .map(|(r, &i)| WitnessNode {
                    role: r.to_string(),
                    loc: self.nodes[i].loc.clone(),
                })
                .collect(),
        }
    }
}

/// Edge `from → to` when `to` depends on `from`; indices into `nodes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependenceGraph {
    pub nodes: Vec<crate::syntax::QuantNode>,
    pub edges: Vec<(usize, usize)>,
}

impl DependenceGraph {
    pub fn has_edge(&self, from: &Locator, to: &Locator) -> bool {
        let pos = |l: &Locator| self.nodes.iter().position(|n| &n.loc == l);
        match (pos(from), pos(to)) {
            (Some(a), Some(b)) => self.edges.contains(&(a, b)),
            _ => false,
        }
    }
}

pub fn dependence_graph(t: &PrefixTree) -> DependenceGraph {
    let nodes = t.quantifiers();
    let mut edges = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate() {
            if a.loc.is_ancestor_of(&b.loc) && !b.slash.contains(&a.var) {
                edges.push((i, j));
            }
        }
    }
    DependenceGraph { nodes, edges }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WitnessNode {
    pub role: String,
    pub loc: Locator,
}

/// Operator occurrences instantiating a pattern, by role.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub nodes: Vec<WitnessNode>,
}

impl Witness {
    pub fn locators(&self) -> Vec<Locator> {
        self.nodes.iter().map(|n| n.loc.clone()).collect()
    }

    pub fn get(&self, role: &str) -> Option<&Locator> {
        self.nodes.iter().find(|n| n.role == role).map(|n| &n.loc)
    }

    fn key(&self) -> Vec<Locator> {
        self.locators()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GhSubclass {
    #[serde(rename = "GH1(&)")]
    Gh1And,
    #[serde(rename = "GH1(|)")]
    Gh1Or,
    #[serde(rename = "GH2(&)")]
    Gh2And,
    #[serde(rename = "GH2(|)")]
    Gh2Or,
}

impl GhSubclass {
    fn new(second: bool, op: Connective) -> Self {
        match (second, op) {
            (false, Connective::And) => GhSubclass::Gh1And,
            (false, Connective::Or) => GhSubclass::Gh1Or,
            (true, Connective::And) => GhSubclass::Gh2And,
            (true, Connective::Or) => GhSubclass::Gh2Or,
        }
    }

    pub fn is_gh2(self) -> bool {
        matches!(self, GhSubclass::Gh2And | GhSubclass::Gh2Or)
    }
}

impl fmt::Display for GhSubclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GhSubclass::Gh1And => "GH1(∧)",
            GhSubclass::Gh1Or => "GH1(∨)",
            GhSubclass::Gh2And => "GH2(∧)",
            GhSubclass::Gh2Or => "GH2(∨)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    Henkin,
    Signalling,
    GeneralizedHenkin,
    Coordinated,
    /// A coordinated pattern whose mediating connective is ∧.
    ConjunctiveCoordinated,
}

const HENKIN_ROLES: [&str; 4] = ["x", "y", "z", "w"];
const SIGNALLING_ROLES: [&str; 3] = ["x", "y", "z"];
const GH_ROLES: [&str; 5] = ["x", "y", "u", "v", "connective"];
const COORD_ROLES: [&str; 6] = ["x", "connective", "y", "z", "u", "w"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub henkin: Option<Witness>,
    pub signalling: Option<Witness>,
    pub generalized_henkin: Option<Witness>,
    /// Minimal witness per subclass; witnesses whose existentials share a
    /// path have no subclass (they are Henkin).
    pub gh_subclasses: BTreeMap<GhSubclass, Witness>,
    pub coordinated: Option<Witness>,
    pub coordinated_first_kind: Option<Witness>,
    pub coordinated_second_kind: Option<Witness>,
    pub conjunctive_coordinated: Option<Witness>,
    pub modest: bool,
    pub first_order: bool,
}

impl PatternReport {
    pub fn has_subclass(&self, s: GhSubclass) -> bool {
        self.gh_subclasses.contains_key(&s)
    }

    pub fn is_gh2(&self) -> bool {
        self.gh_subclasses.keys().any(|s| s.is_gh2())
    }
}

fn keep_min(slot: &mut Option<Witness>, w: Witness) {
    if slot.as_ref().is_none_or(|cur| w.key() < cur.key()) {
        *slot = Some(w);
    }
}

fn henkin_ok(ix: &Index, x: usize, y: usize, z: usize, w: usize) -> bool {
    use Quantifier::*;
    ix.is_quant(x, Forall)
        && ix.is_quant(y, Exists)
        && ix.is_quant(z, Forall)
        && ix.is_quant(w, Exists)
        && ix.dep(y, x)
        && !ix.dep(y, z)
        && !ix.dep(y, w)
        && ix.dep(w, z)
        && !ix.dep(w, x)
        && !ix.dep(w, y)
        && [x, y, z, w]
            .iter()
            .all(|&a| [x, y, z, w].iter().all(|&b| ix.comparable(a, b)))
}

fn signalling_ok(ix: &Index, x: usize, y: usize, z: usize) -> bool {
    use Quantifier::*;
    ix.is_quant(x, Forall)
        && ix.is_quant(y, Exists)
        && ix.is_quant(z, Exists)
        && ix.dep(y, x)
        && ix.dep(z, y)
        && !ix.dep(z, x)
}

fn gh_ok(ix: &Index, x: usize, y: usize, u: usize, v: usize) -> bool {
    use Quantifier::*;
    ix.is_quant(x, Forall)
        && ix.is_quant(y, Forall)
        && ix.is_quant(u, Exists)
        && ix.is_quant(v, Exists)
        && u != v
        && ix.prec(x, u)
        && ix.prec(x, v)
        && ix.dep(u, x)
        && !ix.dep(u, y)
        && !ix.dep(u, v)
        && ix.dep(v, y)
        && !ix.dep(v, x)
        && !ix.dep(v, u)
}

fn coord_ok(ix: &Index, op: Connective, ids: [usize; 6]) -> bool {
    use Quantifier::*;
    let [x, c, y, z, u, w] = ids;
    ix.is_quant(x, Forall)
        && ix.op(c) == Some(op)
        && ix.is_quant(y, Forall)
        && ix.is_quant(z, Forall)
        && ix.is_quant(u, Exists)
        && ix.is_quant(w, Exists)
        && u != w
        && ix.prec(x, c)
        && ix.prec(c, u)
        && ix.prec(c, w)
        && ix.dep(u, y)
        && !ix.dep(u, x)
        && !ix.dep(u, z)
        && !ix.dep(u, w)
        && ix.dep(w, z)
        && !ix.dep(w, x)
        && !ix.dep(w, y)
        && !ix.dep(w, u)
}

/// First kind: `u` and `w` lie in different children of the connective.
fn first_kind(ix: &Index, c: usize, u: usize, w: usize) -> bool {
    let d = ix.nodes[c].loc.depth();
    ix.nodes[u].loc.0[d] != ix.nodes[w].loc.0[d]
}

fn gh_subclass(ix: &Index, y: usize, u: usize, v: usize) -> Option<(usize, GhSubclass)> {
    let c = ix.lca(u, v)?;
    let op = ix.op(c)?;
    Some((c, GhSubclass::new(ix.prec(y, c), op)))
}

fn coordinated_search(ix: &Index, op: Connective, mut visit: impl FnMut([usize; 6])) {
    let univ = ix.quants(Quantifier::Forall);
    let exist = ix.quants(Quantifier::Exists);
    for c in ix.conns(op) {
        let below: Vec<usize> = exist.iter().copied().filter(|&e| ix.prec(c, e)).collect();
        let xs: Vec<usize> = univ.iter().copied().filter(|&x| ix.prec(x, c)).collect();
        for &u in &below {
            for &w in &below {
                if u == w || ix.dep(u, w) || ix.dep(w, u) {
                    continue;
                }
                for &x in &xs {
                    if ix.dep(u, x) || ix.dep(w, x) {
                        continue;
                    }
                    for &y in univ.iter().filter(|&&y| ix.dep(u, y) && !ix.dep(w, y)) {
                        for &z in univ.iter().filter(|&&z| ix.dep(w, z) && !ix.dep(u, z)) {
                            let ids = [x, c, y, z, u, w];
                            if coord_ok(ix, op, ids) {
                                visit(ids);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn require_regular(t: &PrefixTree) -> Result<()> {
    if t.is_regular() {
        Ok(())
    } else {
        Err(Error::Irregular(format!("tree `{t}` is not regular")))
    }
}

pub fn detect_patterns(t: &PrefixTree) -> Result<PatternReport> {
    require_regular(t)?;
    let ix = Index::new(t);
    let univ = ix.quants(Quantifier::Forall);
    let exist = ix.quants(Quantifier::Exists);

    let mut henkin = None;
    let mut signalling = None;
    let mut gh = None;
    let mut subclasses: BTreeMap<GhSubclass, Witness> = BTreeMap::new();

    for &x in &univ {
        for &y in &exist {
            if !ix.dep(y, x) {
                continue;
            }
            for &z in &exist {
                if signalling_ok(&ix, x, y, z) {
                    keep_min(&mut signalling, ix.witness(&SIGNALLING_ROLES, &[x, y, z]));
                }
            }
            for &z in &univ {
                for &w in &exist {
                    if henkin_ok(&ix, x, y, z, w) {
                        keep_min(&mut henkin, ix.witness(&HENKIN_ROLES, &[x, y, z, w]));
                    }
                }
            }
        }
    }

    for &x in &univ {
        for &y in &univ {
            for &u in &exist {
                for &v in &exist {
                    if !gh_ok(&ix, x, y, u, v) {
                        continue;
                    }
                    match gh_subclass(&ix, y, u, v) {
                        Some((c, s)) => {
                            let w = ix.witness(&GH_ROLES, &[x, y, u, v, c]);
                            let slot = subclasses.entry(s).or_insert_with(|| w.clone());
                            if w.key() < slot.key() {
                                *slot = w.clone();
                            }
                            keep_min(&mut gh, w);
                        }
                        None => keep_min(&mut gh, ix.witness(&GH_ROLES[..4], &[x, y, u, v])),
                    }
                }
            }
        }
    }

    let mut coordinated = None;
    let mut first = None;
    let mut second = None;
    coordinated_search(&ix, Connective::Or, |ids| {
        let w = ix.witness(&COORD_ROLES, &ids);
        if first_kind(&ix, ids[1], ids[4], ids[5]) {
            keep_min(&mut first, w.clone());
        } else {
            keep_min(&mut second, w.clone());
        }
        keep_min(&mut coordinated, w);
    });
    let mut conjunctive = None;
    coordinated_search(&ix, Connective::And, |ids| {
        keep_min(&mut conjunctive, ix.witness(&COORD_ROLES, &ids));
    });

    let modest = signalling.is_none() && gh.is_none() && coordinated.is_none();
    let first_order = ix.nodes.iter().all(|n| match &n.kind {
        NodeKind::Quant { slash, .. } => slash.is_empty(),
        NodeKind::Conn(_) => true,
    });
    Ok(PatternReport {
        henkin,
        signalling,
        generalized_henkin: gh,
        gh_subclasses: subclasses,
        coordinated,
        coordinated_first_kind: first,
        coordinated_second_kind: second,
        conjunctive_coordinated: conjunctive,
        modest,
        first_order,
    })
}

/// Re-checks a witness against the defining predicate of `pattern`.
pub fn check_witness(t: &PrefixTree, pattern: Pattern, w: &Witness) -> bool {
    let ix = Index::new(t);
    let Some(ids) = w
        .nodes
        .iter()
        .map(|n| ix.find(&n.loc))
        .collect::<Option<Vec<usize>>>()
    else {
        return false;
    };
    match (pattern, ids.as_slice()) {
        (Pattern::Henkin, &[x, y, z, w]) => henkin_ok(&ix, x, y, z, w),
        (Pattern::Signalling, &[x, y, z]) => signalling_ok(&ix, x, y, z),
        (Pattern::GeneralizedHenkin, &[x, y, u, v]) => gh_ok(&ix, x, y, u, v),
        (Pattern::GeneralizedHenkin, &[x, y, u, v, c]) => {
            gh_ok(&ix, x, y, u, v) && gh_subclass(&ix, y, u, v).is_some_and(|(l, _)| l == c)
        }
        (Pattern::Coordinated, &[x, c, y, z, u, w]) => {
            coord_ok(&ix, Connective::Or, [x, c, y, z, u, w])
        }
        (Pattern::ConjunctiveCoordinated, &[x, c, y, z, u, w]) => {
            coord_ok(&ix, Connective::And, [x, c, y, z, u, w])
        }
        _ => false,
    }
}

/// Node correspondence from the extended tree into the extending one.
pub type Injection = BTreeMap<Locator, Locator>;

/// An injection witnessing that `u` extends `t`: quantifier kinds and
/// connective types kept, variables renamed consistently, `≺` preserved
/// and dependence between quantifiers preserved in both directions.
pub fn extends(u: &PrefixTree, t: &PrefixTree) -> Option<Injection> {
    let (it, iu) = (Index::new(t), Index::new(u));
    let mut st = ExtState {
        it: &it,
        iu: &iu,
        map: Vec::new(),
        used: vec![false; iu.nodes.len()],
        vars: BTreeMap::new(),
        vars_back: BTreeMap::new(),
    };
    if st.extend() {
        Some(
            st.map
                .iter()
                .enumerate()
                .map(|(a, &b)| (it.nodes[a].loc.clone(), iu.nodes[b].loc.clone()))
                .collect(),
        )
    } else {
        None
    }
}

struct ExtState<'a> {
    it: &'a Index,
    iu: &'a Index,
    map: Vec<usize>,
    used: Vec<bool>,
    vars: BTreeMap<String, String>,
    vars_back: BTreeMap<String, String>,
}

impl ExtState<'_> {
    fn extend(&mut self) -> bool {
        let a = self.map.len();
        if a == self.it.nodes.len() {
            return true;
        }
        for b in 0..self.iu.nodes.len() {
            if self.used[b] || !self.compatible(a, b) {
                continue;
            }
            let mut added = None;
            if let (NodeKind::Quant { var: va, .. }, NodeKind::Quant { var: vb, .. }) =
                (&self.it.nodes[a].kind, &self.iu.nodes[b].kind)
            {
                match (self.vars.get(va), self.vars_back.get(vb)) {
                    (Some(x), _) if x != vb => continue,
                    (_, Some(y)) if y != va => continue,
                    (None, None) => {
                        self.vars.insert(va.clone(), vb.clone());
                        self.vars_back.insert(vb.clone(), va.clone());
                        added = Some((va.clone(), vb.clone()));
                    }
                    _ => {}
                }
            }
            self.map.push(b);
            self.used[b] = true;
            if self.extend() {
                return true;
            }
            self.map.pop();
            self.used[b] = false;
            if let Some((va, vb)) = added {
                self.vars.remove(&va);
                self.vars_back.remove(&vb);
            }
        }
        false
    }

    fn compatible(&self, a: usize, b: usize) -> bool {
        let same_kind = match (&self.it.nodes[a].kind, &self.iu.nodes[b].kind) {
            (NodeKind::Quant { kind: k1, .. }, NodeKind::Quant { kind: k2, .. }) => k1 == k2,
            (NodeKind::Conn(o1), NodeKind::Conn(o2)) => o1 == o2,
            _ => false,
        };
        if !same_kind {
            return false;
        }
        let quant = |ix: &Index, i: usize| matches!(ix.nodes[i].kind, NodeKind::Quant { .. });
        self.map.iter().enumerate().all(|(a2, &b2)| {
            if self.it.prec(a2, a) && !self.iu.prec(b2, b) {
                return false;
            }
            if self.it.prec(a, a2) && !self.iu.prec(b, b2) {
                return false;
            }
            if quant(self.it, a) && quant(self.it, a2) {
                self.it.dep(a, a2) == self.iu.dep(b, b2) && self.it.dep(a2, a) == self.iu.dep(b2, b)
            } else {
                true
            }
        })
    }
}

/// Same tree up to a consistent bijective renaming of variables and
/// commutation of connective children.
pub fn same_up_to_renaming(a: &PrefixTree, b: &PrefixTree) -> bool {
    fn go(
        a: &PrefixTree,
        b: &PrefixTree,
        fwd: &mut BTreeMap<String, String>,
        back: &mut BTreeMap<String, String>,
    ) -> bool {
        match (a, b) {
            (PrefixTree::Gap(_), PrefixTree::Gap(_)) => true,
            (
                PrefixTree::Quant {
                    kind: k1,
                    var: v1,
                    slash: s1,
                    child: c1,
                },
                PrefixTree::Quant {
                    kind: k2,
                    var: v2,
                    slash: s2,
                    child: c2,
                },
            ) => {
                if k1 != k2 || s1.len() != s2.len() {
                    return false;
                }
                let (f0, b0) = (fwd.clone(), back.clone());
                let ok = bind(fwd, back, v1, v2)
                    && s1
                        .iter()
                        .all(|x| fwd.get(x).is_some_and(|y| s2.contains(y)))
                    && go(c1, c2, fwd, back);
                if !ok {
                    *fwd = f0;
                    *back = b0;
                }
                ok
            }
            (
                PrefixTree::Conn {
                    op: o1,
                    left: l1,
                    right: r1,
                },
                PrefixTree::Conn {
                    op: o2,
                    left: l2,
                    right: r2,
                },
            ) => {
                if o1 != o2 {
                    return false;
                }
                for (x, y) in [(l2, r2), (r2, l2)] {
                    let (f0, b0) = (fwd.clone(), back.clone());
                    if go(l1, x, fwd, back) && go(r1, y, fwd, back) {
                        return true;
                    }
                    *fwd = f0;
                    *back = b0;
                }
                false
            }
            _ => false,
        }
    }
    fn bind(
        fwd: &mut BTreeMap<String, String>,
        back: &mut BTreeMap<String, String>,
        x: &str,
        y: &str,
    ) -> bool {
        match (fwd.get(x), back.get(y)) {
            (Some(a), Some(b)) => a == y && b == x,
            (None, None) => {
                fwd.insert(x.into(), y.into());
                back.insert(y.into(), x.into());
                true
            }
            _ => false,
        }
    }
    go(a, b, &mut BTreeMap::new(), &mut BTreeMap::new())
}

/// Minimal trees of the classification table, by name.
pub const NAMED_TREES: [(&str, &str); 18] = [
    ("henkin_linear", "A x E y A z (E w/{x,y}) []"),
    ("henkin_alt", "A x A z (E y/{z}) (E w/{x,y}) []"),
    ("signalling", "A x E z (E y/{x}) []"),
    ("gh1_and", "A x ((E u []) & (A y (E v/{x}) []))"),
    ("gh2_and", "A x A y (((E u/{y}) []) & (E v/{x}) [])"),
    ("gh1_or", "A x ((E u []) | (A y (E v/{x}) []))"),
    ("gh2_or", "A x A y (((E u/{y}) []) | (E v/{x}) [])"),
    ("c1", "A x ((A y (E u/{x}) []) | (A z (E v/{x}) []))"),
    ("c2", "A x A y (((E u/{x}) []) | (A z (E v/{x,y}) []))"),
    ("c3", "A x A y A z (((E u/{x,z}) []) | (E v/{x,y}) [])"),
    (
        "c1p",
        "A x ([] | ((A y (E u/{x}) []) & (A z (E v/{x}) [])))",
    ),
    (
        "c2p",
        "A x ([] | (A y (((E u/{x}) []) & (A z (E v/{x,y}) []))))",
    ),
    (
        "c3p",
        "A x ([] | (A y A z (((E u/{x,z}) []) & (E v/{x,y}) [])))",
    ),
    (
        "c4p",
        "A x A y ([] | (((E u/{x}) []) & (A z (E v/{x,y}) [])))",
    ),
    (
        "c5p",
        "A x A y ([] | (A z (((E u/{x,z}) []) & (E v/{x,y}) [])))",
    ),
    (
        "c6p",
        "A x A y A z ([] | (((E u/{x,z}) []) & (E v/{x,y}) []))",
    ),
    ("modest_prefix", "A x E y []"),
    ("modest_branching", "A x ((E y []) | (A z E w []))"),
];

const SECOND_KIND_MINIMAL: [&str; 6] = ["c1p", "c2p", "c3p", "c4p", "c5p", "c6p"];

pub fn named_tree(name: &str) -> Option<PrefixTree> {
    NAMED_TREES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| parse_tree(s).expect("named trees parse"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    FO,
    NPComplete,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Henkin,
    Signalling,
    GeneralizedHenkin,
    CoordinatedFirstKind,
    Modest,
    CoordinatedSecondKind,
    DisjunctionFree,
    ConjunctionFree,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub problem: Option<String>,
    pub witness_locators: Vec<Locator>,
    pub reason: String,
    pub family: Family,
    /// Which rule of the decision chain fired, 1–9.
    pub branch: u8,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    fn new(verdict: VerdictKind, family: Family, branch: u8, reason: impl Into<String>) -> Self {
        Verdict {
            verdict,
            problem: None,
            witness_locators: Vec::new(),
            reason: reason.into(),
            family,
            branch,
            diagnostics: Vec::new(),
        }
    }

    fn np(family: Family, branch: u8, problem: &str, w: &Witness, reason: String) -> Self {
        Verdict {
            problem: Some(problem.into()),
            witness_locators: w.locators(),
            ..Verdict::new(VerdictKind::NPComplete, family, branch, reason)
        }
    }
}

/// C2-shaped coordinated witnesses have `y` or `z` above the disjunction.
fn coordinated_problem(w: &Witness) -> &'static str {
    let c = w.get("connective").expect("coordinated witness");
    let above = |r: &str| w.get(r).is_some_and(|l| l.is_ancestor_of(c));
    if above("y") || above("z") {
        "SAT"
    } else {
        "SET SPLITTING"
    }
}

pub fn classify(t: &PrefixTree) -> Result<Verdict> {
    let r = detect_patterns(t)?;
    if let Some(w) = &r.henkin {
        return Ok(Verdict::np(
            Family::Henkin,
            1,
            "3-COLORING",
            w,
            "contains a Henkin path".into(),
        ));
    }
    if let Some(w) = &r.signalling {
        return Ok(Verdict::np(
            Family::Signalling,
            2,
            "EXACT COVER BY 3-SETS",
            w,
            "contains a signalling path".into(),
        ));
    }
    if let Some(w) = r.gh_subclasses.get(&GhSubclass::Gh2Or) {
        return Ok(Verdict::np(
            Family::GeneralizedHenkin,
            3,
            "SAT",
            w,
            "generalized Henkin of subclass GH2(∨)".into(),
        ));
    }
    if let Some(first) = &r.coordinated_first_kind {
        // Prefer a C1-shaped witness when the tree has both shapes.
        let ix = Index::new(t);
        let mut c1: Option<Witness> = None;
        coordinated_search(&ix, Connective::Or, |ids| {
            let w = ix.witness(&COORD_ROLES, &ids);
            if first_kind(&ix, ids[1], ids[4], ids[5]) && coordinated_problem(&w) == "SET SPLITTING"
            {
                keep_min(&mut c1, w);
            }
        });
        let w = c1.as_ref().unwrap_or(first);
        let problem = coordinated_problem(w);
        return Ok(Verdict::np(
            Family::CoordinatedFirstKind,
            4,
            problem,
            w,
            "coordinated of the first kind".into(),
        ));
    }
    if r.modest {
        return Ok(Verdict::new(
            VerdictKind::FO,
            Family::Modest,
            5,
            "modest: neither signalling, generalized Henkin nor coordinated",
        ));
    }
    for name in SECOND_KIND_MINIMAL {
        let m = named_tree(name).expect("known name");
        if same_up_to_renaming(t, &m) {
            return Ok(Verdict::new(
                VerdictKind::FO,
                Family::CoordinatedSecondKind,
                6,
                format!("minimal coordinated tree of the second kind ({name})"),
            ));
        }
    }
    // Henkin and signalling are excluded by branches 1–2.
    if !t.has_connective(Connective::Or) {
        return Ok(Verdict::new(
            VerdictKind::FO,
            Family::DisjunctionFree,
            7,
            "generalized Henkin without disjunctions",
        ));
    }
    if !t.has_connective(Connective::And) && !r.is_gh2() && r.coordinated.is_none() {
        return Ok(Verdict::new(
            VerdictKind::FO,
            Family::ConjunctionFree,
            8,
            "conjunction-free, not GH2 nor coordinated",
        ));
    }
    let mut v = Verdict::new(
        VerdictKind::Unknown,
        Family::Open,
        9,
        "falls in a family whose complexity is open",
    );
    for s in r.gh_subclasses.keys() {
        v.diagnostics.push(format!("extension* of {s}"));
    }
    if let Some(w) = &r.coordinated_second_kind {
        v.diagnostics
            .push("extension* of C1'-C6' (coordinated, second kind)".into());
        v.witness_locators = w.locators();
    }
    if r.conjunctive_coordinated.is_some() {
        v.diagnostics
            .push("contains a coordinated-like pattern mediated by ∧".into());
    }
    Ok(v)
}

/// Variables occurring anywhere in the tree, in quantifiers or slash sets.
pub fn tree_variables(t: &PrefixTree) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for q in t.quantifiers() {
        out.insert(q.var);
        out.extend(q.slash);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PrefixTree {
        parse_tree(s).unwrap()
    }

    fn loc(s: &str) -> Locator {
        s.parse().unwrap()
    }

    #[test]
    fn dependence_examples() {
        let g = dependence_graph(&t("A x E y []"));
        assert_eq!(g.edges, vec![(0, 1)]);
        assert!(dependence_graph(&t("A x (E y/{x}) []")).edges.is_empty());
        let g = dependence_graph(&t("A x E z (E y/{x}) []"));
        assert!(g.has_edge(&loc("root"), &loc("0")));
        assert!(g.has_edge(&loc("0"), &loc("0.0")));
        assert!(!g.has_edge(&loc("root"), &loc("0.0")));
    }

    #[test]
    fn pattern_examples() {
        let r = detect_patterns(&t("A x E z (E y/{x}) []")).unwrap();
        assert!(r.signalling.is_some() && r.henkin.is_none());
        let r = detect_patterns(&t("A x E y A z (E w/{x,y}) []")).unwrap();
        assert!(r.henkin.is_some() && r.generalized_henkin.is_some());
        let r = detect_patterns(&named_tree("gh2_or").unwrap()).unwrap();
        assert!(r.has_subclass(GhSubclass::Gh2Or));
        assert!(r.coordinated.is_none() && r.henkin.is_none() && r.signalling.is_none());
        let r = detect_patterns(&t("A x E y []")).unwrap();
        assert!(r.modest && r.first_order);
    }

    #[test]
    fn witnesses_recheck() {
        for (name, _) in NAMED_TREES {
            let tr = named_tree(name).unwrap();
            let r = detect_patterns(&tr).unwrap();
            let checks = [
                (Pattern::Henkin, &r.henkin),
                (Pattern::Signalling, &r.signalling),
                (Pattern::GeneralizedHenkin, &r.generalized_henkin),
                (Pattern::Coordinated, &r.coordinated),
                (Pattern::ConjunctiveCoordinated, &r.conjunctive_coordinated),
            ];
            for (p, w) in checks {
                if let Some(w) = w {
                    assert!(check_witness(&tr, p, w), "{name} {p:?}");
                }
            }
        }
    }

    #[test]
    fn extension_examples() {
        let a = t("A x A z (E y/{z}) (E w/{x,y}) []");
        let id = extends(&a, &a).unwrap();
        assert!(id.iter().all(|(k, v)| k == v));
        let b = t("A x A z (E y/{z}) (E w/{x,y}) ([] & [])");
        assert!(extends(&b, &a).is_some());
        assert!(extends(&t("A x E y []"), &t("A x (E y/{x}) []")).is_none());
        assert!(extends(&t("A a E b []"), &t("A x E y []")).is_some());
    }

    #[test]
    fn renaming_and_commutation() {
        assert!(same_up_to_renaming(
            &t("A a ((E b []) | (E c/{a}) [])"),
            &t("A x (((E y/{x}) []) | E z [])")
        ));
        assert!(!same_up_to_renaming(
            &t("A x E y []"),
            &t("A x (E y/{x}) []")
        ));
    }

    #[test]
    fn classify_examples() {
        let v = classify(&t("A x E y []")).unwrap();
        assert_eq!((v.verdict, v.branch), (VerdictKind::FO, 5));
        let v = classify(&named_tree("gh2_or").unwrap()).unwrap();
        assert_eq!(v.problem.as_deref(), Some("SAT"));
        let v = classify(&named_tree("c1").unwrap()).unwrap();
        assert_eq!(v.problem.as_deref(), Some("SET SPLITTING"));
        let v = classify(&t("A x E z (E y/{x}) []")).unwrap();
        assert_eq!(v.family, Family::Signalling);
        assert!(classify(&t("A x A x []")).is_err());
    }
}
