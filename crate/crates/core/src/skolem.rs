//! Truth by Skolemization.
//!
//! Every existential occurrence gets a function of the superordinated
//! variables it does not slash; universal slashes are erased. Tables are
//! filled lazily while sweeping universal tuples: the matrix is evaluated in
//! Kleene logic and the first missing entry it needs is branched on, with
//! chronological backtracking.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{Atom, Connective, Formula, Quantifier, Term};
use crate::teams::{check_closed, Structure};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
const MAX_TABLE: usize = 1 << 24;

/// `IFWB_BUDGET` if set and valid, else the default.
pub fn budget_from_env() -> u64 {
    std::env::var("IFWB_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkolemFunction {
    pub name: String,
    pub var: String,
    /// Arguments in ≺ order; existential arguments stand for their own
    /// Skolem terms.
    pub args: Vec<String>,
    /// The universal variables the function ultimately depends on.
    pub universal_support: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkolemPlan {
    pub functions: Vec<SkolemFunction>,
    pub universals: Vec<String>,
    /// Quantifier-free matrix with Skolem terms written in.
    pub matrix: String,
}

#[derive(Debug, Clone, Copy)]
enum STerm {
    Occ(usize),
    Elem(u32),
}

#[derive(Debug, Clone)]
enum MNode {
    Lit {
        positive: bool,
        rel: Option<String>,
        args: Vec<STerm>,
    },
    Conn(Connective, Box<MNode>, Box<MNode>),
}

#[derive(Debug, Clone)]
struct Occ {
    kind: Quantifier,
    var: String,
    args: Vec<usize>,
}

struct Prepared {
    occs: Vec<Occ>,
    matrix: MNode,
}

fn prepare(f: &Formula, consts: &BTreeMap<String, u32>) -> Result<Prepared> {
    if !f.is_negation_normal() {
        return Err(Error::NotNegationNormal);
    }
    if !f.no_nested_requantification() {
        return Err(Error::Irregular(
            "variable requantified in its own scope".into(),
        ));
    }
    fn go(
        f: &Formula,
        scope: &mut Vec<(String, usize)>,
        occs: &mut Vec<Occ>,
        consts: &BTreeMap<String, u32>,
    ) -> Result<MNode> {
        match f {
            Formula::Lit(l) => {
                let term = |t: &Term| -> Result<STerm> {
                    match t {
                        Term::Var(v) => {
                            if let Some((_, o)) = scope.iter().rev().find(|(n, _)| n == v) {
                                Ok(STerm::Occ(*o))
                            } else if let Some(&e) = consts.get(v) {
                                Ok(STerm::Elem(e))
                            } else {
                                Err(Error::Open(vec![v.clone()]))
                            }
                        }
                        Term::Const(c) => consts
                            .get(c)
                            .map(|&e| STerm::Elem(e))
                            .ok_or_else(|| Error::UnknownConstant(c.clone())),
                    }
                };
                let (rel, args) = match &l.atom {
                    Atom::Rel { name, args } => (
                        Some(name.clone()),
                        args.iter().map(term).collect::<Result<Vec<_>>>()?,
                    ),
                    Atom::Eq(a, b) => (None, vec![term(a)?, term(b)?]),
                };
                Ok(MNode::Lit {
                    positive: l.positive,
                    rel,
                    args,
                })
            }
            Formula::Neg(_) => Err(Error::NotNegationNormal),
            Formula::Conn(c, l, r) => Ok(MNode::Conn(
                *c,
                Box::new(go(l, scope, occs, consts)?),
                Box::new(go(r, scope, occs, consts)?),
            )),
            Formula::Quant {
                kind,
                var,
                slash,
                body,
            } => {
                let args = match kind {
                    Quantifier::Exists => scope
                        .iter()
                        .filter(|(n, _)| !slash.contains(n))
                        .map(|(_, o)| *o)
                        .collect(),
                    Quantifier::Forall => vec![],
                };
                occs.push(Occ {
                    kind: *kind,
                    var: var.clone(),
                    args,
                });
                scope.push((var.clone(), occs.len() - 1));
                let m = go(body, scope, occs, consts);
                scope.pop();
                m
            }
        }
    }
    let mut occs = Vec::new();
    let matrix = go(f, &mut Vec::new(), &mut occs, consts)?;
    Ok(Prepared { occs, matrix })
}

fn occurrence_names(occs: &[Occ]) -> Vec<String> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    occs.iter()
        .map(|o| {
            let k = seen.entry(&o.var).or_insert(0);
            *k += 1;
            if *k == 1 {
                o.var.clone()
            } else {
                format!("{}_{}", o.var, *k - 1)
            }
        })
        .collect()
}

pub fn skolemize(sentence: &Formula) -> Result<SkolemPlan> {
    // Unbound identifiers are treated as constants for the plan.
    let mut cnames: Vec<String> = sentence.free_term_vars().into_iter().collect();
    cnames.extend(sentence.constants());
    let consts: BTreeMap<String, u32> = cnames
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();
    let p = prepare(sentence, &consts)?;
    let names = occurrence_names(&p.occs);
    let mut rendered = vec![String::new(); p.occs.len()];
    let mut support: Vec<Vec<usize>> = vec![vec![]; p.occs.len()];
    let mut functions = Vec::new();
    for (i, o) in p.occs.iter().enumerate() {
        match o.kind {
            Quantifier::Forall => {
                rendered[i] = names[i].clone();
                support[i] = vec![i];
            }
            Quantifier::Exists => {
                let args: Vec<String> = o.args.iter().map(|&a| rendered[a].clone()).collect();
                rendered[i] = format!("f_{}({})", names[i], args.join(","));
                let mut s: Vec<usize> = o.args.iter().flat_map(|&a| support[a].clone()).collect();
                s.sort();
                s.dedup();
                functions.push(SkolemFunction {
                    name: format!("f_{}", names[i]),
                    var: o.var.clone(),
                    args: o.args.iter().map(|&a| names[a].clone()).collect(),
                    universal_support: s.iter().map(|&a| names[a].clone()).collect(),
                });
                support[i] = s;
            }
        }
    }
    fn show(m: &MNode, r: &[String], c: &[String]) -> String {
        let t = |t: &STerm| match t {
            STerm::Occ(o) => r[*o].clone(),
            STerm::Elem(e) => c[*e as usize].clone(),
        };
        match m {
            MNode::Lit {
                positive,
                rel: None,
                args,
            } => format!(
                "{}{}{}",
                t(&args[0]),
                if *positive { "=" } else { "!=" },
                t(&args[1])
            ),
            MNode::Lit {
                positive,
                rel: Some(name),
                args,
            } => {
                let a: Vec<String> = args.iter().map(t).collect();
                format!(
                    "{}{}({})",
                    if *positive { "" } else { "~" },
                    name,
                    a.join(",")
                )
            }
            MNode::Conn(op, l, rr) => {
                format!("({} {} {})", show(l, r, c), op.symbol(), show(rr, r, c))
            }
        }
    }
    let universals = p
        .occs
        .iter()
        .enumerate()
        .filter(|(_, o)| o.kind == Quantifier::Forall)
        .map(|(i, _)| names[i].clone())
        .collect();
    Ok(SkolemPlan {
        functions,
        universals,
        matrix: show(&p.matrix, &rendered, &cnames),
    })
}

enum K {
    T,
    F,
    /// Missing table entry (existential occurrence, key).
    U(usize, usize),
}

struct Search<'m> {
    m: &'m Structure,
    n: u32,
    occs: Vec<Occ>,
    matrix: MNode,
    universals: Vec<usize>,
    vals: Vec<u32>,
    tables: Vec<Vec<Option<u32>>>,
    nodes: u64,
    budget: u64,
}

impl<'m> Search<'m> {
    fn occ_value(&self, o: usize) -> std::result::Result<u32, (usize, usize)> {
        let occ = &self.occs[o];
        if occ.kind == Quantifier::Forall {
            return Ok(self.vals[o]);
        }
        let mut key = 0usize;
        for &a in &occ.args {
            key = key * self.n as usize + self.occ_value(a)? as usize;
        }
        self.tables[o][key].ok_or((o, key))
    }

    fn eval(&self, m: &MNode) -> K {
        match m {
            MNode::Lit {
                positive,
                rel,
                args,
            } => {
                let mut vals = Vec::with_capacity(args.len());
                for t in args {
                    match t {
                        STerm::Elem(e) => vals.push(*e),
                        STerm::Occ(o) => match self.occ_value(*o) {
                            Ok(v) => vals.push(v),
                            Err((e, k)) => return K::U(e, k),
                        },
                    }
                }
                let holds = match rel {
                    None => vals[0] == vals[1],
                    Some(r) => self.m.holds(r, &vals),
                };
                if holds == *positive {
                    K::T
                } else {
                    K::F
                }
            }
            MNode::Conn(c, l, r) => {
                let (short, other) = match c {
                    Connective::And => (K::F, K::T),
                    Connective::Or => (K::T, K::F),
                };
                let a = self.eval(l);
                if std::mem::discriminant(&a) == std::mem::discriminant(&short) {
                    return a;
                }
                let b = self.eval(r);
                if std::mem::discriminant(&b) == std::mem::discriminant(&short) {
                    return b;
                }
                match (a, b) {
                    (K::U(e, k), _) | (_, K::U(e, k)) => K::U(e, k),
                    _ => other,
                }
            }
        }
    }

    fn load(&mut self, mut t: usize) {
        for &u in self.universals.iter().rev() {
            self.vals[u] = (t % self.n as usize) as u32;
            t /= self.n as usize;
        }
    }

    fn solve(&mut self, mut t: usize, total: usize) -> Result<bool> {
        loop {
            if t == total {
                return Ok(true);
            }
            self.load(t);
            match self.eval(&self.matrix) {
                K::T => t += 1,
                K::F => return Ok(false),
                K::U(e, key) => {
                    for a in 0..self.n {
                        self.nodes += 1;
                        if self.nodes > self.budget {
                            return Err(Error::Budget(self.budget));
                        }
                        self.tables[e][key] = Some(a);
                        if self.solve(t, total)? {
                            return Ok(true);
                        }
                    }
                    self.tables[e][key] = None;
                    return Ok(false);
                }
            }
        }
    }
}

pub fn truth_by_skolem(m: &Structure, sentence: &Formula) -> Result<bool> {
    truth_by_skolem_with_budget(m, sentence, DEFAULT_BUDGET)
}

/// Like [`truth_by_skolem`], failing with [`Error::Budget`] once more than
/// `budget` table entries have been tried.
pub fn truth_by_skolem_with_budget(m: &Structure, sentence: &Formula, budget: u64) -> Result<bool> {
    check_closed(m, sentence)?;
    let p = prepare(sentence, &m.constants)?;
    for r in collect_relations(&p.matrix) {
        let rel = m
            .relations
            .get(&r.0)
            .ok_or_else(|| Error::UnknownRelation(r.0.clone()))?;
        if let Some(k) = rel.arity {
            if k != r.1 {
                return Err(Error::Arity {
                    name: r.0,
                    expected: k,
                    found: r.1,
                });
            }
        }
    }
    let n = m.domain;
    let mut tables = Vec::with_capacity(p.occs.len());
    for o in &p.occs {
        let size = match o.kind {
            Quantifier::Forall => 0,
            Quantifier::Exists => (n as usize)
                .checked_pow(o.args.len() as u32)
                .filter(|&s| s <= MAX_TABLE)
                .ok_or_else(|| Error::Limit("Skolem table too large".into()))?,
        };
        tables.push(vec![None; size]);
    }
    let universals: Vec<usize> = (0..p.occs.len())
        .filter(|&i| p.occs[i].kind == Quantifier::Forall)
        .collect();
    let total = (n as usize)
        .checked_pow(universals.len() as u32)
        .ok_or_else(|| Error::Limit("too many universal tuples".into()))?;
    let mut s = Search {
        m,
        n,
        vals: vec![0; p.occs.len()],
        occs: p.occs,
        matrix: p.matrix,
        universals,
        tables,
        nodes: 0,
        budget,
    };
    s.solve(0, total)
}

fn collect_relations(m: &MNode) -> Vec<(String, usize)> {
    match m {
        MNode::Lit {
            rel: Some(r), args, ..
        } => vec![(r.clone(), args.len())],
        MNode::Lit { .. } => vec![],
        MNode::Conn(_, l, r) => {
            let mut v = collect_relations(l);
            v.extend(collect_relations(r));
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn plan_examples() {
        let p = skolemize(&f("A x ((A y (E u/{x}) P(u,y)) | (A z (E v/{x}) P(v,z)))")).unwrap();
        assert_eq!(p.functions[0].args, vec!["y"]);
        assert_eq!(p.functions[1].args, vec!["z"]);
        assert_eq!(p.universals, vec!["x", "y", "z"]);
        let p = skolemize(&f("A x E y x=y")).unwrap();
        assert_eq!(p.functions[0].args, vec!["x"]);
        assert_eq!(p.matrix, "x=f_y(x)");
        let p = skolemize(&f("A x (E y/{x}) x=y")).unwrap();
        assert!(p.functions[0].args.is_empty());
        assert_eq!(p.matrix, "x=f_y()");
        let p = skolemize(&f("A x E z (E y/{x}) y=z")).unwrap();
        assert_eq!(p.functions[1].args, vec!["z"]);
        assert_eq!(p.functions[1].universal_support, vec!["x"]);
        let p = skolemize(&f("A x E u (u=1 & x!=c)")).unwrap();
        assert_eq!(p.matrix, "(f_u(x)=1 & x!=c)");
    }

    #[test]
    fn truth_examples() {
        assert!(truth_by_skolem(&Structure::new(3), &f("A x E y x=y")).unwrap());
        assert!(!truth_by_skolem(&Structure::new(2), &f("A x (E y/{x}) x=y")).unwrap());
        assert!(truth_by_skolem(&Structure::new(1), &f("A x (E y/{x}) x=y")).unwrap());
    }

    #[test]
    fn signalling_is_not_composition_with_universals() {
        let m = Structure::new(2).with_constant("c", 0);
        assert!(truth_by_skolem(&m, &f("A x E u (E v/{x}) v=x")).unwrap());
        assert!(!truth_by_skolem(&m, &f("A x E u (E v/{x}) (u=c & v=x)")).unwrap());
    }

    #[test]
    fn preconditions() {
        let m = Structure::new(2);
        assert!(matches!(
            truth_by_skolem(&m, &f("~(A x x=x)")),
            Err(Error::NotNegationNormal)
        ));
        assert!(matches!(
            truth_by_skolem(&m, &f("A x E x x=x")),
            Err(Error::Irregular(_))
        ));
        assert!(matches!(
            truth_by_skolem(&m, &f("E x x=y")),
            Err(Error::Open(_))
        ));
    }

    #[test]
    fn budget_is_reported() {
        let m = Structure::new(4);
        let g = f("A x A y (E u/{x}) u=x");
        assert!(matches!(
            truth_by_skolem_with_budget(&m, &g, 3),
            Err(Error::Budget(3))
        ));
        assert!(!truth_by_skolem(&m, &g).unwrap());
    }
}
