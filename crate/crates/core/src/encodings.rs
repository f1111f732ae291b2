//! The four fixed IF sentences and the structure encodings of SAT (two
//! ways), SET SPLITTING and 2-COLORABILITY, with brute-force oracles.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{parse_formula, Formula};
use crate::teams::{Relation, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// SAT through the generalized Henkin sentence φ.
    SatGh2,
    /// SAT through the coordinated sentence θ.
    SatC2,
    SetSplitting,
    #[serde(rename = "2col")]
    TwoCol,
}

impl Problem {
    pub const ALL: [Problem; 4] = [
        Problem::SatGh2,
        Problem::SatC2,
        Problem::SetSplitting,
        Problem::TwoCol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::SatGh2 => "sat-gh2",
            Problem::SatC2 => "sat-c2",
            Problem::SetSplitting => "set-splitting",
            Problem::TwoCol => "2col",
        }
    }

    pub fn sentence_name(self) -> &'static str {
        match self {
            Problem::SatGh2 => "phi_sat",
            Problem::SatC2 => "theta_sat",
            Problem::SetSplitting => "eta_split",
            Problem::TwoCol => "xi_2col",
        }
    }

    pub fn sentence(self) -> Formula {
        builtin_sentence(self.sentence_name()).expect("builtin sentences parse")
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown problem `{s}`")))
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["phi_sat", "theta_sat", "eta_split", "xi_2col"];

/// Variants kept for comparison; they do not define their problems.
pub const DEFECTIVE_NAMES: [&str; 2] = ["phi_sat_unguarded", "xi_2col_naive"];

// O(a,b): a is a letter occurring in clause b.
fn occ_letter_clause(a: &str, b: &str) -> String {
    format!("(~C({a}) & C({b}) & (P({a},{b}) | N({a},{b})))")
}

fn not_occ_letter_clause(a: &str, b: &str) -> String {
    format!("(C({a}) | ~C({b}) | (~P({a},{b}) & ~N({a},{b})))")
}

// Flipped reading: b is a letter occurring in clause a.
fn occ_clause_letter(a: &str, b: &str) -> String {
    format!("(C({a}) & ~C({b}) & (P({a},{b}) | N({a},{b})))")
}

fn not_occ_clause_letter(a: &str, b: &str) -> String {
    format!("(~C({a}) | C({b}) | (~P({a},{b}) & ~N({a},{b})))")
}

fn builtin_text(name: &str) -> Option<String> {
    Some(match name {
        "phi_sat" => {
            let psi1 = format!(
                "{} & (~P(x,y) | u=1) & (~N(x,y) | u=0)",
                occ_letter_clause("x", "y")
            );
            // The ¬C(y) guard keeps pairs whose y is not a clause satisfiable.
            let psi2 = format!(
                "~C(y) | ({} & ({} | x!=v))",
                occ_letter_clause("v", "y"),
                not_occ_letter_clause("x", "y")
            );
            format!("A x A y (((E u/{{y}}) ({psi1})) | ((E v/{{x}}) ({psi2})))")
        }
        // Without the guard: false on every structure.
        "phi_sat_unguarded" => {
            let psi1 = format!(
                "{} & (~P(x,y) | u=1) & (~N(x,y) | u=0)",
                occ_letter_clause("x", "y")
            );
            let psi2 = format!(
                "{} & ({} | x!=v)",
                occ_letter_clause("v", "y"),
                not_occ_letter_clause("x", "y")
            );
            format!("A x A y (((E u/{{y}}) ({psi1})) | ((E v/{{x}}) ({psi2})))")
        }
        "theta_sat" => {
            let chi1 = format!(
                "{} & (~P(x,y) | u=1) & (~N(x,y) | u=0)",
                occ_clause_letter("x", "y")
            );
            let chi2 = format!(
                "z!=x | {} | (v!=y & {})",
                not_occ_clause_letter("x", "y"),
                occ_clause_letter("x", "v")
            );
            format!("A x A y (((E u/{{x}}) ({chi1})) | (A z (E v/{{x,y}}) ({chi2})))")
        }
        "eta_split" => "A x ((A y (E u/{x}) (~A(x) | ~B(y) | (u!=x & R(u,y)))) \
             | (A z (E v/{x}) (~A(x) | ~B(z) | (v!=x & R(v,z)))))"
            .to_string(),
        // u names a neighbour of y on the left side whenever one exists;
        // the row x=y then forbids y itself from being on that side.
        "xi_2col" => "A x ((A y (E u/{x}) ((~E(x,y) | E(u,y)) & (x!=y | ~E(u,y)))) \
             | (A z (E v/{x,y}) ((~E(x,z) | E(v,z)) & (x!=z | ~E(v,z)))))"
            .to_string(),
        // With u=y & u!=x the choice u=y always works: true on every
        // loopless graph.
        "xi_2col_naive" => "A x ((A y (E u/{x}) (~E(x,y) | (u=y & u!=x))) \
             | (A z (E v/{x,y}) (~E(x,z) | (v=z & v!=x))))"
            .to_string(),
        _ => return None,
    })
}

/// One of `phi_sat`, `theta_sat`, `eta_split`, `xi_2col`, in negation
/// normal form.
pub fn builtin_sentence(name: &str) -> Result<Formula> {
    let text = builtin_text(name)
        .ok_or_else(|| Error::Input(format!("unknown builtin sentence `{name}`")))?;
    parse_formula(&text)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfInstance {
    pub vars: usize,
    /// DIMACS-style signed literals, variables numbered from 1.
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        CnfInstance { vars, clauses }
    }

    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let bad = |msg: String| Error::Parse {
                line: ln + 1,
                col: 1,
                msg,
            };
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                    return Err(bad("expected `p cnf VARS CLAUSES`".into()));
                }
                let v = parts[2]
                    .parse()
                    .map_err(|_| bad("bad variable count".into()))?;
                let c = parts[3]
                    .parse()
                    .map_err(|_| bad("bad clause count".into()))?;
                header = Some((v, c));
                continue;
            }
            let (vars, _) = header.ok_or_else(|| bad("clause before `p cnf` header".into()))?;
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| bad(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(bad(format!("literal {lit} exceeds variable count {vars}")));
                } else {
                    cur.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| Error::Input("missing `p cnf` header".into()))?;
        if !cur.is_empty() {
            clauses.push(cur);
        }
        if clauses.len() != count {
            return Err(Error::Input(format!(
                "header announces {count} clauses, found {}",
                clauses.len()
            )));
        }
        Ok(CnfInstance { vars, clauses })
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&format!("{l} "));
            }
            s.push_str("0\n");
        }
        s
    }

    /// Deduplicated clauses; rejects the restrictions the chosen encoding
    /// relies on.
    pub fn normalized_for(&self, problem: Problem) -> Result<Vec<BTreeSet<i32>>> {
        if self.vars > 64 {
            return Err(Error::Instance("more than 64 variables".into()));
        }
        let mut out = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            let set: BTreeSet<i32> = c.iter().copied().collect();
            if set
                .iter()
                .any(|&l| l == 0 || l.unsigned_abs() as usize > self.vars)
            {
                return Err(Error::Instance(format!("clause {i}: literal out of range")));
            }
            if set.iter().any(|l| set.contains(&-l)) {
                return Err(Error::Instance(format!(
                    "clause {i}: contains a complementary pair of literals"
                )));
            }
            let letters: BTreeSet<u32> = set.iter().map(|l| l.unsigned_abs()).collect();
            match problem {
                Problem::SatGh2 if letters.len() < 2 => {
                    return Err(Error::Instance(format!(
                        "clause {i}: must mention at least two distinct variables"
                    )))
                }
                Problem::SatC2 if letters.is_empty() => {
                    return Err(Error::Instance(format!("clause {i}: must be nonempty")))
                }
                _ => {}
            }
            out.push(set);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSplitInstance {
    /// Size of the ground set `0..A`.
    #[serde(rename = "A")]
    pub ground: usize,
    pub blocks: Vec<Vec<u32>>,
}

impl SetSplitInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("set splitting instance: {e}")))
    }

    /// Distinct blocks as sets, in first-occurrence order.
    pub fn normalized(&self) -> Result<Vec<BTreeSet<u32>>> {
        if self.ground > 64 {
            return Err(Error::Instance("ground set larger than 64".into()));
        }
        let mut out: Vec<BTreeSet<u32>> = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let set: BTreeSet<u32> = b.iter().copied().collect();
            if set.iter().any(|&e| e as usize >= self.ground) {
                return Err(Error::Instance(format!("block {i}: element out of range")));
            }
            if set.len() < 2 {
                return Err(Error::Instance(format!(
                    "block {i}: every block needs at least two elements"
                )));
            }
            if !out.contains(&set) {
                out.push(set);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    /// Undirected edges stored as `(min, max)`.
    pub edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut g = Graph {
            vertices,
            edges: BTreeSet::new(),
        };
        for (a, b) in edges {
            if a == b {
                return Err(Error::Instance(format!("self-loop at vertex {a}")));
            }
            if a as usize >= vertices || b as usize >= vertices {
                return Err(Error::Instance(format!(
                    "edge {a} {b}: vertex out of range"
                )));
            }
            g.edges.insert((a.min(b), a.max(b)));
        }
        Ok(g)
    }

    /// `p vertices n` header, then one `u v` pair per line; `#` and `c`
    /// lines are comments.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                line: ln + 1,
                col: 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.first() == Some(&"p") {
                if parts.len() != 3 || parts[1] != "vertices" || n.is_some() {
                    return Err(bad("expected `p vertices N`"));
                }
                n = Some(parts[2].parse().map_err(|_| bad("bad vertex count"))?);
                continue;
            }
            if n.is_none() {
                return Err(bad("edge before `p vertices` header"));
            }
            if parts.len() != 2 {
                return Err(bad("expected `u v`"));
            }
            let a = parts[0].parse().map_err(|_| bad("bad vertex"))?;
            let b = parts[1].parse().map_err(|_| bad("bad vertex"))?;
            edges.push((a, b));
        }
        let n = n.ok_or_else(|| Error::Input("missing `p vertices` header".into()))?;
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("p vertices {}\n", self.vertices);
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Cnf(CnfInstance),
    SetSplit(SetSplitInstance),
    Graph(Graph),
}

impl Instance {
    /// Reads the input format belonging to `problem`.
    pub fn parse(problem: Problem, text: &str) -> Result<Self> {
        Ok(match problem {
            Problem::SatGh2 | Problem::SatC2 => Instance::Cnf(CnfInstance::from_dimacs(text)?),
            Problem::SetSplitting => Instance::SetSplit(SetSplitInstance::from_json(text)?),
            Problem::TwoCol => Instance::Graph(Graph::from_edge_list(text)?),
        })
    }
}

fn mismatch(problem: Problem) -> Error {
    Error::Instance(format!("instance kind does not match problem {problem}"))
}

fn elem(i: usize) -> u32 {
    u32::try_from(i).expect("domain fits in u32")
}

pub fn encode_instance(problem: Problem, inst: &Instance) -> Result<Structure> {
    match (problem, inst) {
        (Problem::SatGh2 | Problem::SatC2, Instance::Cnf(c)) => encode_cnf(problem, c),
        (Problem::SetSplitting, Instance::SetSplit(s)) => encode_set_splitting(s),
        (Problem::TwoCol, Instance::Graph(g)) => encode_graph(g),
        _ => Err(mismatch(problem)),
    }
}

// Letters 0..k, clauses k..k+m, then the elements named 0 and 1.
fn encode_cnf(problem: Problem, cnf: &CnfInstance) -> Result<Structure> {
    let clauses = cnf.normalized_for(problem)?;
    let k = cnf.vars;
    let m = clauses.len();
    let (zero, one) = (elem(k + m), elem(k + m + 1));
    let mut p = Relation::new(2);
    let mut n = Relation::new(2);
    let c = Relation::with_tuples(1, (k..k + m).map(|i| vec![elem(i)]));
    for (j, clause) in clauses.iter().enumerate() {
        let cl = elem(k + j);
        for &lit in clause {
            let letter = lit.unsigned_abs() - 1;
            let pair = match problem {
                Problem::SatGh2 => vec![letter, cl],
                _ => vec![cl, letter],
            };
            if lit > 0 {
                p.tuples.insert(pair);
            } else {
                n.tuples.insert(pair);
            }
        }
    }
    let s = Structure::new(elem(k + m + 2))
        .with_relation("P", p)
        .with_relation("N", n)
        .with_relation("C", c)
        .with_constant("0", zero)
        .with_constant("1", one);
    s.validate()?;
    Ok(s)
}

// Ground elements 0..k, then one element per distinct block.
fn encode_set_splitting(inst: &SetSplitInstance) -> Result<Structure> {
    let blocks = inst.normalized()?;
    let k = inst.ground;
    if k + blocks.len() == 0 {
        return Err(Error::Instance("empty ground set and family".into()));
    }
    let a = Relation::with_tuples(1, (0..k).map(|i| vec![elem(i)]));
    let b = Relation::with_tuples(1, (0..blocks.len()).map(|j| vec![elem(k + j)]));
    let mut r = Relation::new(2);
    for (j, block) in blocks.iter().enumerate() {
        for &e in block {
            r.tuples.insert(vec![e, elem(k + j)]);
        }
    }
    let s = Structure::new(elem(k + blocks.len()))
        .with_relation("A", a)
        .with_relation("B", b)
        .with_relation("R", r);
    s.validate()?;
    Ok(s)
}

fn encode_graph(g: &Graph) -> Result<Structure> {
    if g.vertices == 0 {
        return Err(Error::Instance("graph without vertices".into()));
    }
    let g = Graph::new(g.vertices, g.edges.iter().copied())?;
    let e = Relation::with_tuples(
        2,
        g.edges.iter().flat_map(|&(a, b)| [vec![a, b], vec![b, a]]),
    );
    let s = Structure::new(elem(g.vertices)).with_relation("E", e);
    s.validate()?;
    Ok(s)
}

/// Independent brute-force decision procedures.
pub fn oracle_solve(problem: Problem, inst: &Instance) -> Result<bool> {
    match (problem, inst) {
        (Problem::SatGh2 | Problem::SatC2, Instance::Cnf(c)) => {
            let clauses = c.normalized_for(problem)?;
            Ok(brute_sat(c.vars, &clauses))
        }
        (Problem::SetSplitting, Instance::SetSplit(s)) => {
            let blocks = s.normalized()?;
            Ok((0u64..1 << s.ground).any(|mask| {
                blocks.iter().all(|b| {
                    b.iter().any(|&e| mask >> e & 1 == 1) && b.iter().any(|&e| mask >> e & 1 == 0)
                })
            }))
        }
        (Problem::TwoCol, Instance::Graph(g)) => {
            let g = Graph::new(g.vertices, g.edges.iter().copied())?;
            Ok(bipartite(&g))
        }
        _ => Err(mismatch(problem)),
    }
}

fn brute_sat(vars: usize, clauses: &[BTreeSet<i32>]) -> bool {
    (0u64..1 << vars).any(|asg| {
        clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let bit = asg >> (l.unsigned_abs() - 1) & 1 == 1;
                bit == (l > 0)
            })
        })
    })
}

fn bipartite(g: &Graph) -> bool {
    let mut adj = vec![Vec::new(); g.vertices];
    for &(a, b) in &g.edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    let mut color: Vec<Option<bool>> = vec![None; g.vertices];
    for s in 0..g.vertices {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].expect("queued vertices are colored");
            for &w in &adj[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(d) if d == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_tree, prefix_tree};

    #[test]
    fn builtins_parse_in_nnf() {
        for name in BUILTIN_NAMES {
            let f = builtin_sentence(name).unwrap();
            assert!(f.is_negation_normal(), "{name}");
        }
        assert!(builtin_sentence("nope").is_err());
    }

    #[test]
    fn defective_variants() {
        let tri = Instance::Graph(Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        let m = encode_instance(Problem::TwoCol, &tri).unwrap();
        let naive = builtin_sentence("xi_2col_naive").unwrap();
        assert!(crate::skolem::truth_by_skolem(&m, &naive).unwrap());
        assert!(!crate::skolem::truth_by_skolem(&m, &Problem::TwoCol.sentence()).unwrap());
        let cnf = Instance::Cnf(CnfInstance::new(2, vec![vec![1, 2]]));
        let m = encode_instance(Problem::SatGh2, &cnf).unwrap();
        let unguarded = builtin_sentence("phi_sat_unguarded").unwrap();
        assert!(!crate::skolem::truth_by_skolem(&m, &unguarded).unwrap());
        for name in DEFECTIVE_NAMES {
            assert_eq!(
                prefix_tree(&builtin_sentence(name).unwrap()),
                prefix_tree(&builtin_sentence(&name[..name.rfind('_').unwrap()]).unwrap())
            );
        }
    }

    #[test]
    fn builtin_trees() {
        let phi = prefix_tree(&builtin_sentence("phi_sat").unwrap());
        assert_eq!(
            phi,
            parse_tree("A x A y (((E u/{y}) []) | (E v/{x}) [])").unwrap()
        );
        let eta = prefix_tree(&builtin_sentence("eta_split").unwrap());
        assert_eq!(
            eta,
            parse_tree("A x ((A y (E u/{x}) []) | (A z (E v/{x}) []))").unwrap()
        );
        let xi = prefix_tree(&builtin_sentence("xi_2col").unwrap());
        let v = xi.quantifiers().into_iter().find(|q| q.var == "v").unwrap();
        assert_eq!(v.slash, ["x".to_string(), "y".to_string()].into());
    }

    #[test]
    fn cnf_encoding_example() {
        let inst = Instance::Cnf(CnfInstance::new(2, vec![vec![1, 2]]));
        let s = encode_instance(Problem::SatGh2, &inst).unwrap();
        assert_eq!(s.domain, 5);
        assert_eq!(s.relations["P"].tuples, [vec![0, 2], vec![1, 2]].into());
        assert!(s.relations["N"].tuples.is_empty());
        assert_eq!(s.relations["C"].tuples, [vec![2]].into());
        assert_ne!(s.constants["0"], s.constants["1"]);
        let s = encode_instance(Problem::SatC2, &inst).unwrap();
        assert_eq!(s.relations["P"].tuples, [vec![2, 0], vec![2, 1]].into());
    }

    #[test]
    fn cnf_restrictions() {
        let one = Instance::Cnf(CnfInstance::new(2, vec![vec![1, 1]]));
        assert!(matches!(
            encode_instance(Problem::SatGh2, &one),
            Err(Error::Instance(_))
        ));
        assert!(encode_instance(Problem::SatC2, &one).is_ok());
        let empty = Instance::Cnf(CnfInstance::new(1, vec![vec![]]));
        assert!(encode_instance(Problem::SatC2, &empty).is_err());
        let taut = Instance::Cnf(CnfInstance::new(2, vec![vec![1, -1, 2]]));
        assert!(encode_instance(Problem::SatC2, &taut).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let c = CnfInstance::from_dimacs("c hi\np cnf 2 2\n1 2 0\n-1\n-2 0\n").unwrap();
        assert_eq!(c.clauses, vec![vec![1, 2], vec![-1, -2]]);
        assert_eq!(CnfInstance::from_dimacs(&c.to_dimacs()).unwrap(), c);
        assert!(CnfInstance::from_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(CnfInstance::from_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn set_splitting_example() {
        let inst = SetSplitInstance::from_json(r#"{"A": 2, "blocks": [[0, 1]]}"#).unwrap();
        let s = encode_instance(Problem::SetSplitting, &Instance::SetSplit(inst)).unwrap();
        assert_eq!(s.domain, 3);
        assert_eq!(s.relations["A"].tuples, [vec![0], vec![1]].into());
        assert_eq!(s.relations["B"].tuples, [vec![2]].into());
        assert_eq!(s.relations["R"].tuples, [vec![0, 2], vec![1, 2]].into());
        let small = SetSplitInstance {
            ground: 2,
            blocks: vec![vec![0, 0]],
        };
        assert!(encode_instance(Problem::SetSplitting, &Instance::SetSplit(small)).is_err());
    }

    #[test]
    fn graph_example() {
        let g = Graph::from_edge_list("p vertices 3\n0 1\n1 2\n2 0\n").unwrap();
        let s = encode_instance(Problem::TwoCol, &Instance::Graph(g.clone())).unwrap();
        assert_eq!(s.domain, 3);
        assert_eq!(s.relations["E"].tuples.len(), 6);
        assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Graph::from_edge_list("p vertices 2\n1 1\n").is_err());
    }

    #[test]
    fn oracle_examples() {
        let sat = Instance::Cnf(CnfInstance::new(2, vec![vec![1, 2], vec![-1, -2]]));
        assert!(oracle_solve(Problem::SatGh2, &sat).unwrap());
        let tri = SetSplitInstance {
            ground: 3,
            blocks: vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        };
        assert!(!oracle_solve(Problem::SetSplitting, &Instance::SetSplit(tri)).unwrap());
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!oracle_solve(Problem::TwoCol, &Instance::Graph(tri)).unwrap());
        let edge = Graph::new(2, [(0, 1)]).unwrap();
        assert!(oracle_solve(Problem::TwoCol, &Instance::Graph(edge)).unwrap());
    }

    #[test]
    fn problem_names() {
        for p in Problem::ALL {
            assert_eq!(p.name().parse::<Problem>().unwrap(), p);
        }
        assert_eq!(serde_json::to_string(&Problem::TwoCol).unwrap(), "\"2col\"");
    }
}
