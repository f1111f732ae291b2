use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub type VarSet = BTreeSet<String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Forall => "A",
            Quantifier::Exists => "E",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    pub fn dual(self) -> Self {
        match self {
            Connective::And => Connective::Or,
            Connective::Or => Connective::And,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(s) => Some(s),
            Term::Const(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Rel { name: String, args: Vec<Term> },
    Eq(Term, Term),
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Rel { args, .. } => args.iter().collect(),
            Atom::Eq(a, b) => vec![a, b],
        }
    }

    fn terms_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Atom::Rel { args, .. } => args.iter_mut().collect(),
            Atom::Eq(a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

/// IF formulas. `Lit` covers atoms, equalities and their negations;
/// `Neg` is general negation of a compound subformula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Lit(Literal),
    Neg(Box<Formula>),
    Conn(Connective, Box<Formula>, Box<Formula>),
    Quant {
        kind: Quantifier,
        var: String,
        slash: VarSet,
        body: Box<Formula>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSets {
    pub free: VarSet,
    pub bound: VarSet,
    pub all: VarSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    pub strongly_regular: bool,
}

impl Formula {
    pub fn atom(name: &str, args: &[&str]) -> Self {
        Formula::Lit(Literal {
            positive: true,
            atom: Atom::Rel {
                name: name.to_string(),
                args: args.iter().map(|a| Term::var(a)).collect(),
            },
        })
    }

    pub fn eq(a: &str, b: &str) -> Self {
        Formula::Lit(Literal {
            positive: true,
            atom: Atom::Eq(Term::var(a), Term::var(b)),
        })
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::Conn(Connective::And, Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Conn(Connective::Or, Box::new(l), Box::new(r))
    }

    pub fn quant(kind: Quantifier, var: &str, slash: &[&str], body: Formula) -> Self {
        Formula::Quant {
            kind,
            var: var.to_string(),
            slash: slash.iter().map(|s| s.to_string()).collect(),
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Self::quant(Quantifier::Forall, var, &[], body)
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Self::quant(Quantifier::Exists, var, &[], body)
    }

    /// Negation pushed onto a literal where possible.
    pub fn negate(self) -> Self {
        match self {
            Formula::Lit(mut l) => {
                l.positive = !l.positive;
                Formula::Lit(l)
            }
            Formula::Neg(f) => *f,
            f => Formula::Neg(Box::new(f)),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Lit(_) => true,
            Formula::Neg(f) => f.is_quantifier_free(),
            Formula::Conn(_, l, r) => l.is_quantifier_free() && r.is_quantifier_free(),
            Formula::Quant { .. } => false,
        }
    }

    pub fn is_negation_normal(&self) -> bool {
        match self {
            Formula::Lit(_) => true,
            Formula::Neg(_) => false,
            Formula::Conn(_, l, r) => l.is_negation_normal() && r.is_negation_normal(),
            Formula::Quant { body, .. } => body.is_negation_normal(),
        }
    }

    /// Free variables by the IF recursion: slash-set variables are free
    /// at their quantifier.
    pub fn free_vars(&self) -> VarSet {
        match self {
            Formula::Lit(l) => l
                .atom
                .terms()
                .into_iter()
                .filter_map(|t| t.as_var().map(str::to_string))
                .collect(),
            Formula::Neg(f) => f.free_vars(),
            Formula::Conn(_, l, r) => {
                let mut s = l.free_vars();
                s.extend(r.free_vars());
                s
            }
            Formula::Quant {
                var, slash, body, ..
            } => {
                let mut s = body.free_vars();
                s.remove(var);
                s.extend(slash.iter().cloned());
                s
            }
        }
    }

    /// Free variables counting only term positions (slash sets ignored).
    pub fn free_term_vars(&self) -> VarSet {
        match self {
            Formula::Quant { var, body, .. } => {
                let mut s = body.free_term_vars();
                s.remove(var);
                s
            }
            Formula::Neg(f) => f.free_term_vars(),
            Formula::Conn(_, l, r) => {
                let mut s = l.free_term_vars();
                s.extend(r.free_term_vars());
                s
            }
            lit => lit.free_vars(),
        }
    }

    /// Names used as constant terms.
    pub fn constants(&self) -> VarSet {
        match self {
            Formula::Lit(l) => l
                .atom
                .terms()
                .into_iter()
                .filter(|t| matches!(t, Term::Const(_)))
                .map(|t| t.name().to_string())
                .collect(),
            Formula::Neg(f) => f.constants(),
            Formula::Conn(_, l, r) => {
                let mut s = l.constants();
                s.extend(r.constants());
                s
            }
            Formula::Quant { body, .. } => body.constants(),
        }
    }

    pub fn bound_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.visit_quants(&mut |_, v, _| {
            out.insert(v.to_string());
        });
        out
    }

    pub fn var_sets(&self) -> VarSets {
        let free = self.free_vars();
        let bound = self.bound_vars();
        let all = free.union(&bound).cloned().collect();
        VarSets { free, bound, all }
    }

    fn visit_quants(&self, f: &mut impl FnMut(Quantifier, &str, &VarSet)) {
        match self {
            Formula::Lit(_) => {}
            Formula::Neg(g) => g.visit_quants(f),
            Formula::Conn(_, l, r) => {
                l.visit_quants(f);
                r.visit_quants(f);
            }
            Formula::Quant {
                kind,
                var,
                slash,
                body,
            } => {
                f(*kind, var, slash);
                body.visit_quants(f);
            }
        }
    }

    pub fn quantifier_count(&self) -> usize {
        let mut n = 0;
        self.visit_quants(&mut |_, _, _| n += 1);
        n
    }

    /// Clause 2 of regularity only: no quantifier over `v` beneath another
    /// quantifier over `v`.
    pub fn no_nested_requantification(&self) -> bool {
        fn go(f: &Formula, above: &mut Vec<String>) -> bool {
            match f {
                Formula::Lit(_) => true,
                Formula::Neg(g) => go(g, above),
                Formula::Conn(_, l, r) => go(l, above) && go(r, above),
                Formula::Quant { var, body, .. } => {
                    if above.contains(var) {
                        return false;
                    }
                    above.push(var.clone());
                    let ok = go(body, above);
                    above.pop();
                    ok
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn regularity(&self) -> Regularity {
        let sets = self.var_sets();
        let clause1 = sets.free.is_disjoint(&sets.bound);
        let regular = clause1 && self.no_nested_requantification();
        let mut seen = VarSet::new();
        let mut once = true;
        self.visit_quants(&mut |_, v, _| once &= seen.insert(v.to_string()));
        Regularity {
            regular,
            strongly_regular: regular && once,
        }
    }

    pub fn is_regular(&self) -> bool {
        self.regularity().regular
    }

    /// Relation name → arity; errors on inconsistent use.
    pub fn relation_arities(&self) -> Result<BTreeMap<String, usize>, (String, usize, usize)> {
        let mut out = BTreeMap::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Lit(Literal {
                    atom: Atom::Rel { name, args },
                    ..
                }) => {
                    if let Some(&k) = out.get(name) {
                        if k != args.len() {
                            return Err((name.clone(), k, args.len()));
                        }
                    } else {
                        out.insert(name.clone(), args.len());
                    }
                }
                Formula::Lit(_) => {}
                Formula::Neg(g) => stack.push(g),
                Formula::Conn(_, l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                Formula::Quant { body, .. } => stack.push(body),
            }
        }
        Ok(out)
    }

    /// Turns free variable terms named in `consts` into constant terms.
    pub fn resolve_constants(&self, consts: &BTreeSet<String>) -> Formula {
        fn go(f: &Formula, consts: &BTreeSet<String>, bound: &mut Vec<String>) -> Formula {
            match f {
                Formula::Lit(l) => {
                    let mut l = l.clone();
                    for t in l.atom.terms_mut() {
                        if let Term::Var(v) = t {
                            if !bound.contains(v) && consts.contains(v.as_str()) {
                                *t = Term::Const(v.clone());
                            }
                        }
                    }
                    Formula::Lit(l)
                }
                Formula::Neg(g) => Formula::Neg(Box::new(go(g, consts, bound))),
                Formula::Conn(c, l, r) => Formula::Conn(
                    *c,
                    Box::new(go(l, consts, bound)),
                    Box::new(go(r, consts, bound)),
                ),
                Formula::Quant {
                    kind,
                    var,
                    slash,
                    body,
                } => {
                    bound.push(var.clone());
                    let body = go(body, consts, bound);
                    bound.pop();
                    Formula::Quant {
                        kind: *kind,
                        var: var.clone(),
                        slash: slash.clone(),
                        body: Box::new(body),
                    }
                }
            }
        }
        go(self, consts, &mut Vec::new())
    }
}

/// Replace the free occurrences of `u` by `v`, slash sets included.
pub fn subst(f: &Formula, u: &str, v: &str) -> Formula {
    match f {
        Formula::Lit(l) => {
            let mut l = l.clone();
            for t in l.atom.terms_mut() {
                if let Term::Var(name) = t {
                    if name == u {
                        *name = v.to_string();
                    }
                }
            }
            Formula::Lit(l)
        }
        Formula::Neg(g) => Formula::Neg(Box::new(subst(g, u, v))),
        Formula::Conn(c, l, r) => {
            Formula::Conn(*c, Box::new(subst(l, u, v)), Box::new(subst(r, u, v)))
        }
        Formula::Quant {
            kind,
            var,
            slash,
            body,
        } => {
            let slash = rename_in_set(slash, u, v);
            let body = if var == u {
                body.as_ref().clone()
            } else {
                subst(body, u, v)
            };
            Formula::Quant {
                kind: *kind,
                var: var.clone(),
                slash,
                body: Box::new(body),
            }
        }
    }
}

pub(crate) fn rename_in_set(s: &VarSet, u: &str, v: &str) -> VarSet {
    s.iter()
        .map(|x| if x == u { v.to_string() } else { x.clone() })
        .collect()
}

fn map_slashes(f: &Formula, g: &impl Fn(&VarSet) -> VarSet) -> Formula {
    match f {
        Formula::Lit(_) => f.clone(),
        Formula::Neg(h) => Formula::Neg(Box::new(map_slashes(h, g))),
        Formula::Conn(c, l, r) => {
            Formula::Conn(*c, Box::new(map_slashes(l, g)), Box::new(map_slashes(r, g)))
        }
        Formula::Quant {
            kind,
            var,
            slash,
            body,
        } => Formula::Quant {
            kind: *kind,
            var: var.clone(),
            slash: g(slash),
            body: Box::new(map_slashes(body, g)),
        },
    }
}

/// χ/{u}: add `u` to every slash set.
pub fn slash_all(f: &Formula, u: &str) -> Formula {
    map_slashes(f, &|s| {
        let mut s = s.clone();
        s.insert(u.to_string());
        s
    })
}

/// ψ|_u: add `u` to every nonempty slash set.
pub fn slash_nonempty(f: &Formula, u: &str) -> Formula {
    map_slashes(f, &|s| {
        let mut s = s.clone();
        if !s.is_empty() {
            s.insert(u.to_string());
        }
        s
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
