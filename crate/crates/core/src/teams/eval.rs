//! Exact team-semantics evaluation.
//!
//! Formulas are compiled to a node array over variable slots. A row is a
//! `u128` holding one byte per slot, so teams are sorted `Vec<u128>`s and
//! memoisation is cheap. Subformulas whose choice quantifiers carry no
//! effective slash are flat and are decided row by row.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Structure, Team};
use crate::error::{Error, Result};
use crate::syntax::{Atom, Connective, Formula, Quantifier, Term};

const MAX_SLOTS: usize = 16;
const DENSE_LIMIT: usize = 1 << 22;

type Row = u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisjunctionMode {
    /// Y, Z range over partitions of X (sound by downward closure).
    #[default]
    Partition,
    /// Y, Z range over all covers Y ∪ Z = X; exponential, for small teams.
    Cover,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    pub disjunction: DisjunctionMode,
}

#[derive(Debug, Clone, Copy)]
enum CTerm {
    Slot(u8),
    Elem(u32),
}

#[derive(Debug, Clone)]
enum CAtom {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
}

#[derive(Debug, Clone)]
enum CNode {
    Lit(bool, CAtom),
    Neg(usize),
    Conn(Connective, usize, usize),
    Quant {
        kind: Quantifier,
        slot: u8,
        slash: Row,
        body: usize,
    },
}

enum RelTable {
    Dense { arity: usize, bits: Vec<bool> },
    Sparse(HashSet<Vec<u32>>),
}

struct Compiled {
    nodes: Vec<CNode>,
    /// flat[node][p]: p = 0 for ⊨, 1 for ⊨⁻.
    flat: Vec<[bool; 2]>,
    rels: Vec<RelTable>,
    root: usize,
    n: u32,
}

fn field(slot: u8) -> Row {
    0xFF << (8 * slot as u32)
}

fn get(row: Row, slot: u8) -> u32 {
    ((row >> (8 * slot as u32)) & 0xFF) as u32
}

fn set(row: Row, slot: u8, a: u32) -> Row {
    (row & !field(slot)) | ((a as Row) << (8 * slot as u32))
}

struct Compiler<'m> {
    m: &'m Structure,
    slots: Vec<String>,
    nodes: Vec<CNode>,
    flat: Vec<[bool; 2]>,
    rel_index: BTreeMap<String, usize>,
    rels: Vec<RelTable>,
    unbound: Vec<String>,
}

impl<'m> Compiler<'m> {
    fn slot(&mut self, v: &str) -> Result<u8> {
        if let Some(i) = self.slots.iter().position(|s| s == v) {
            return Ok(i as u8);
        }
        if self.slots.len() >= MAX_SLOTS {
            return Err(Error::Limit(format!(
                "team engine supports at most {MAX_SLOTS} distinct variables"
            )));
        }
        self.slots.push(v.to_string());
        Ok((self.slots.len() - 1) as u8)
    }

    fn term(&mut self, t: &Term, dom: u32) -> Result<CTerm> {
        match t {
            Term::Var(v) => {
                if let Some(i) = self.slots.iter().position(|s| s == v) {
                    if dom & (1 << i) != 0 {
                        return Ok(CTerm::Slot(i as u8));
                    }
                }
                if let Some(&e) = self.m.constants.get(v) {
                    return Ok(CTerm::Elem(e));
                }
                self.unbound.push(v.clone());
                Ok(CTerm::Elem(0))
            }
            Term::Const(c) => match self.m.constants.get(c) {
                Some(&e) => Ok(CTerm::Elem(e)),
                None => Err(Error::UnknownConstant(c.clone())),
            },
        }
    }

    fn relation(&mut self, name: &str, arity: usize) -> Result<usize> {
        if let Some(&i) = self.rel_index.get(name) {
            return Ok(i);
        }
        let r = self
            .m
            .relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
        if let Some(k) = r.arity {
            if k != arity {
                return Err(Error::Arity {
                    name: name.to_string(),
                    expected: k,
                    found: arity,
                });
            }
        }
        let n = self.m.domain as usize;
        let size = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
        let table = if size <= DENSE_LIMIT {
            let mut bits = vec![false; size];
            for t in &r.tuples {
                bits[t.iter().rev().fold(0, |acc, &e| acc * n + e as usize)] = true;
            }
            RelTable::Dense { arity, bits }
        } else {
            RelTable::Sparse(r.tuples.iter().cloned().collect())
        };
        self.rels.push(table);
        self.rel_index.insert(name.to_string(), self.rels.len() - 1);
        Ok(self.rels.len() - 1)
    }

    fn push(&mut self, node: CNode, flat: [bool; 2]) -> usize {
        self.nodes.push(node);
        self.flat.push(flat);
        self.nodes.len() - 1
    }

    fn compile(&mut self, f: &Formula, dom: u32) -> Result<usize> {
        match f {
            Formula::Lit(l) => {
                let atom = match &l.atom {
                    Atom::Rel { name, args } => {
                        let r = self.relation(name, args.len())?;
                        let args = args
                            .iter()
                            .map(|t| self.term(t, dom))
                            .collect::<Result<_>>()?;
                        CAtom::Rel(r, args)
                    }
                    Atom::Eq(a, b) => CAtom::Eq(self.term(a, dom)?, self.term(b, dom)?),
                };
                Ok(self.push(CNode::Lit(l.positive, atom), [true, true]))
            }
            Formula::Neg(g) => {
                let a = self.compile(g, dom)?;
                let fl = self.flat[a];
                Ok(self.push(CNode::Neg(a), [fl[1], fl[0]]))
            }
            Formula::Conn(c, l, r) => {
                let a = self.compile(l, dom)?;
                let b = self.compile(r, dom)?;
                let (fa, fb) = (self.flat[a], self.flat[b]);
                Ok(self.push(CNode::Conn(*c, a, b), [fa[0] && fb[0], fa[1] && fb[1]]))
            }
            Formula::Quant {
                kind,
                var,
                slash,
                body,
            } => {
                let slot = self.slot(var)?;
                let mut mask: Row = 0;
                for v in slash {
                    if let Some(i) = self.slots.iter().position(|s| s == v) {
                        if dom & (1 << i) != 0 {
                            mask |= field(i as u8);
                        }
                    }
                }
                let b = self.compile(body, dom | (1 << slot))?;
                let fb = self.flat[b];
                let slashed = mask != 0;
                let flat = match kind {
                    Quantifier::Exists => [fb[0] && !slashed, fb[1]],
                    Quantifier::Forall => [fb[0], fb[1] && !slashed],
                };
                Ok(self.push(
                    CNode::Quant {
                        kind: *kind,
                        slot,
                        slash: mask,
                        body: b,
                    },
                    flat,
                ))
            }
        }
    }
}

fn compile(m: &Structure, f: &Formula, domain: &[String]) -> Result<(Compiled, Vec<u8>)> {
    if m.domain == 0 || m.domain > 255 {
        return Err(Error::Limit("team engine needs 1 ≤ domain ≤ 255".into()));
    }
    let mut c = Compiler {
        m,
        slots: Vec::new(),
        nodes: Vec::new(),
        flat: Vec::new(),
        rel_index: BTreeMap::new(),
        rels: Vec::new(),
        unbound: Vec::new(),
    };
    let mut dom = 0u32;
    let mut cols = Vec::new();
    for v in domain {
        let s = c.slot(v)?;
        dom |= 1 << s;
        cols.push(s);
    }
    let root = c.compile(f, dom)?;
    if !c.unbound.is_empty() {
        c.unbound.sort();
        c.unbound.dedup();
        return Err(Error::Unsuitable(c.unbound));
    }
    Ok((
        Compiled {
            nodes: c.nodes,
            flat: c.flat,
            rels: c.rels,
            root,
            n: m.domain,
        },
        cols,
    ))
}

struct Eval<'c> {
    c: &'c Compiled,
    mode: DisjunctionMode,
    memo: HashMap<(usize, bool, Vec<Row>), bool>,
}

impl<'c> Eval<'c> {
    fn value(t: CTerm, row: Row) -> u32 {
        match t {
            CTerm::Slot(s) => get(row, s),
            CTerm::Elem(e) => e,
        }
    }

    fn atom(&self, a: &CAtom, row: Row) -> bool {
        match a {
            CAtom::Eq(x, y) => Self::value(*x, row) == Self::value(*y, row),
            CAtom::Rel(r, args) => match &self.c.rels[*r] {
                RelTable::Dense { arity, bits } => {
                    debug_assert_eq!(*arity, args.len());
                    let n = self.c.n as usize;
                    let idx = args
                        .iter()
                        .rev()
                        .fold(0, |acc, &t| acc * n + Self::value(t, row) as usize);
                    bits[idx]
                }
                RelTable::Sparse(set) => {
                    let t: Vec<u32> = args.iter().map(|&t| Self::value(t, row)).collect();
                    set.contains(&t)
                }
            },
        }
    }

    /// Single-assignment evaluation; exact for flat nodes.
    fn classical(&self, node: usize, pos: bool, row: Row) -> bool {
        match &self.c.nodes[node] {
            CNode::Lit(p, a) => (self.atom(a, row) == *p) == pos,
            CNode::Neg(a) => self.classical(*a, !pos, row),
            CNode::Conn(c, a, b) => {
                let conj = (*c == Connective::And) == pos;
                if conj {
                    self.classical(*a, pos, row) && self.classical(*b, pos, row)
                } else {
                    self.classical(*a, pos, row) || self.classical(*b, pos, row)
                }
            }
            CNode::Quant {
                kind, slot, body, ..
            } => {
                let choice = (*kind == Quantifier::Exists) == pos;
                let mut vals =
                    (0..self.c.n).map(|a| self.classical(*body, pos, set(row, *slot, a)));
                if choice {
                    vals.any(|b| b)
                } else {
                    vals.all(|b| b)
                }
            }
        }
    }

    fn sat(&mut self, node: usize, pos: bool, team: &[Row]) -> bool {
        if team.is_empty() {
            return true;
        }
        if self.c.flat[node][!pos as usize] {
            return team.iter().all(|&r| self.classical(node, pos, r));
        }
        let key = (node, pos, team.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match self.c.nodes[node].clone() {
            CNode::Lit(..) => unreachable!("literals are flat"),
            CNode::Neg(a) => self.sat(a, !pos, team),
            CNode::Conn(c, a, b) => {
                if (c == Connective::And) == pos {
                    self.sat(a, pos, team) && self.sat(b, pos, team)
                } else {
                    self.split(a, b, pos, team)
                }
            }
            CNode::Quant {
                kind,
                slot,
                slash,
                body,
            } => {
                if (kind == Quantifier::Exists) == pos {
                    self.choose(body, pos, slot, slash, team)
                } else {
                    let mut dup: Vec<Row> = team
                        .iter()
                        .flat_map(|&r| (0..self.c.n).map(move |a| set(r, slot, a)))
                        .collect();
                    canon(&mut dup);
                    self.sat(body, pos, &dup)
                }
            }
        };
        self.memo.insert(key, v);
        v
    }

    fn split(&mut self, a: usize, b: usize, pos: bool, x: &[Row]) -> bool {
        let p = !pos as usize;
        if self.mode == DisjunctionMode::Partition {
            // Downward closure: the flat side can take every row it accepts.
            if self.c.flat[a][p] || self.c.flat[b][p] {
                let (f, g) = if self.c.flat[a][p] { (a, b) } else { (b, a) };
                let rest: Vec<Row> = x
                    .iter()
                    .copied()
                    .filter(|&r| !self.classical(f, pos, r))
                    .collect();
                return self.sat(g, pos, &rest);
            }
            let (mut ya, mut zb, mut free) = (Vec::new(), Vec::new(), Vec::new());
            for &r in x {
                match (self.sat(a, pos, &[r]), self.sat(b, pos, &[r])) {
                    (false, false) => return false,
                    (true, false) => ya.push(r),
                    (false, true) => zb.push(r),
                    (true, true) => free.push(r),
                }
            }
            if !self.sat(a, pos, &ya) || !self.sat(b, pos, &zb) {
                return false;
            }
            self.assign_rows(a, b, pos, &free, &mut ya, &mut zb)
        } else {
            self.covers(a, b, pos, x, 0, &mut Vec::new(), &mut Vec::new())
        }
    }

    fn assign_rows(
        &mut self,
        a: usize,
        b: usize,
        pos: bool,
        free: &[Row],
        ya: &mut Vec<Row>,
        zb: &mut Vec<Row>,
    ) -> bool {
        let Some((&r, rest)) = free.split_first() else {
            return true;
        };
        for (node, side) in [(a, 0), (b, 1)] {
            let team = if side == 0 { &mut *ya } else { &mut *zb };
            team.push(r);
            let mut t = team.clone();
            canon(&mut t);
            if self.sat(node, pos, &t) && self.assign_rows(a, b, pos, rest, ya, zb) {
                return true;
            }
            if side == 0 { &mut *ya } else { &mut *zb }.pop();
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn covers(
        &mut self,
        a: usize,
        b: usize,
        pos: bool,
        x: &[Row],
        i: usize,
        y: &mut Vec<Row>,
        z: &mut Vec<Row>,
    ) -> bool {
        if i == x.len() {
            let (mut yy, mut zz) = (y.clone(), z.clone());
            canon(&mut yy);
            canon(&mut zz);
            return self.sat(a, pos, &yy) && self.sat(b, pos, &zz);
        }
        let r = x[i];
        for choice in 0..3 {
            if choice != 1 {
                y.push(r);
            }
            if choice != 0 {
                z.push(r);
            }
            let ok = self.covers(a, b, pos, x, i + 1, y, z);
            if choice != 1 {
                y.pop();
            }
            if choice != 0 {
                z.pop();
            }
            if ok {
                return true;
            }
        }
        false
    }

    /// Search for a uniform choice function, one value per ~_V class.
    fn choose(&mut self, body: usize, pos: bool, slot: u8, slash: Row, x: &[Row]) -> bool {
        let mut classes: BTreeMap<Row, Vec<Row>> = BTreeMap::new();
        for &r in x {
            classes.entry(r & !slash).or_default().push(r);
        }
        let n = self.c.n;
        let fill = |rows: &[Row], a: u32| {
            let mut t: Vec<Row> = rows.iter().map(|&r| set(r, slot, a)).collect();
            canon(&mut t);
            t
        };
        if self.c.flat[body][!pos as usize] {
            return classes.values().all(|rows| {
                (0..n).any(|a| {
                    rows.iter()
                        .all(|&r| self.classical(body, pos, set(r, slot, a)))
                })
            });
        }
        let mut options: Vec<Vec<Vec<Row>>> = Vec::new();
        for rows in classes.values() {
            let mut opts = Vec::new();
            for a in 0..n {
                let t = fill(rows, a);
                if self.sat(body, pos, &t) {
                    opts.push(t);
                }
            }
            if opts.is_empty() {
                return false;
            }
            options.push(opts);
        }
        if options.len() == 1 {
            return true;
        }
        options.sort_by_key(|o| o.len());
        self.pick(body, pos, &options, &mut Vec::new())
    }

    fn pick(
        &mut self,
        body: usize,
        pos: bool,
        options: &[Vec<Vec<Row>>],
        acc: &mut Vec<Row>,
    ) -> bool {
        let Some((first, rest)) = options.split_first() else {
            return true;
        };
        for opt in first {
            let keep = acc.len();
            acc.extend_from_slice(opt);
            let mut t = acc.clone();
            canon(&mut t);
            if self.sat(body, pos, &t) && self.pick(body, pos, rest, acc) {
                return true;
            }
            acc.truncate(keep);
        }
        false
    }
}

fn canon(t: &mut Vec<Row>) {
    t.sort_unstable();
    t.dedup();
}

fn run(m: &Structure, x: &Team, f: &Formula, pos: bool, opts: EvalOptions) -> Result<bool> {
    let (c, cols) = compile(m, f, x.vars())?;
    let mut team: Vec<Row> = x
        .rows()
        .iter()
        .map(|r| r.iter().zip(&cols).fold(0, |row, (&a, &s)| set(row, s, a)))
        .collect();
    if x.rows().iter().flatten().any(|&a| a >= m.domain) {
        return Err(Error::Input("team value outside the domain".into()));
    }
    canon(&mut team);
    let mut ev = Eval {
        c: &c,
        mode: opts.disjunction,
        memo: HashMap::new(),
    };
    Ok(ev.sat(c.root, pos, &team))
}

/// M, X ⊨ f.
pub fn satisfies(m: &Structure, x: &Team, f: &Formula) -> Result<bool> {
    satisfies_with(m, x, f, EvalOptions::default())
}

pub fn satisfies_with(m: &Structure, x: &Team, f: &Formula, opts: EvalOptions) -> Result<bool> {
    run(m, x, f, true, opts)
}

/// M, X ⊨⁻ f.
pub fn neg_satisfies(m: &Structure, x: &Team, f: &Formula) -> Result<bool> {
    neg_satisfies_with(m, x, f, EvalOptions::default())
}

pub fn neg_satisfies_with(m: &Structure, x: &Team, f: &Formula, opts: EvalOptions) -> Result<bool> {
    run(m, x, f, false, opts)
}
