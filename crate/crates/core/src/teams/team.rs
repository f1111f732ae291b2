use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Structure;
use crate::error::{Error, Result};
use crate::syntax::VarSet;

/// A set of assignments with a common domain. Columns follow `vars`,
/// which is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Team {
    vars: Vec<String>,
    rows: BTreeSet<Vec<u32>>,
}

#[derive(Deserialize)]
struct RawTeam {
    vars: Vec<String>,
    rows: Vec<Vec<u32>>,
}

impl<'de> Deserialize<'de> for Team {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTeam::deserialize(d)?;
        Team::new(raw.vars, raw.rows).map_err(serde::de::Error::custom)
    }
}

impl Team {
    /// Builds a team; columns are reordered so `vars` is sorted.
    pub fn new(vars: Vec<String>, rows: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("team has a repeated variable".into()));
        }
        let mut out = BTreeSet::new();
        for r in rows {
            if r.len() != vars.len() {
                return Err(Error::Input(
                    "team row length differs from its domain".into(),
                ));
            }
            out.insert(order.iter().map(|&i| r[i]).collect());
        }
        Ok(Team {
            vars: sorted,
            rows: out,
        })
    }

    /// {∅}: the team holding only the empty assignment.
    pub fn unit() -> Self {
        Team {
            vars: vec![],
            rows: [vec![]].into(),
        }
    }

    pub fn empty(vars: Vec<String>) -> Self {
        Team::new(vars, []).expect("no rows")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &BTreeSet<Vec<u32>> {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn domain(&self) -> VarSet {
        self.vars.iter().cloned().collect()
    }

    fn column(&self, v: &str) -> Option<usize> {
        self.vars.binary_search_by(|x| x.as_str().cmp(v)).ok()
    }

    pub fn value(&self, row: &[u32], v: &str) -> Option<u32> {
        self.column(v).map(|i| row[i])
    }

    /// Column layout after setting `v`, and the index of `v` in it.
    fn extended(&self, v: &str) -> (Vec<String>, usize, bool) {
        match self.vars.binary_search_by(|x| x.as_str().cmp(v)) {
            Ok(i) => (self.vars.clone(), i, true),
            Err(i) => {
                let mut vars = self.vars.clone();
                vars.insert(i, v.to_string());
                (vars, i, false)
            }
        }
    }

    fn set_row(row: &[u32], i: usize, present: bool, a: u32) -> Vec<u32> {
        let mut r = row.to_vec();
        if present {
            r[i] = a;
        } else {
            r.insert(i, a);
        }
        r
    }

    /// Same team with rows restricted to the given variables.
    pub fn restrict(&self, keep: &VarSet) -> Team {
        let idx: Vec<usize> = (0..self.vars.len())
            .filter(|&i| keep.contains(&self.vars[i]))
            .collect();
        Team {
            vars: idx.iter().map(|&i| self.vars[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| idx.iter().map(|&i| r[i]).collect())
                .collect(),
        }
    }

    pub fn subteam(&self, rows: impl IntoIterator<Item = Vec<u32>>) -> Team {
        Team {
            vars: self.vars.clone(),
            rows: rows.into_iter().filter(|r| self.rows.contains(r)).collect(),
        }
    }

    /// Key identifying the ~_V class of a row: the row with V-columns masked.
    pub fn class_key(&self, row: &[u32], v_set: &VarSet) -> Vec<Option<u32>> {
        self.vars
            .iter()
            .zip(row)
            .map(|(x, &a)| if v_set.contains(x) { None } else { Some(a) })
            .collect()
    }
}

/// F: X → M, stored per assignment of the team it was built for.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChoiceFunction {
    pub values: BTreeMap<Vec<u32>, u32>,
}

impl ChoiceFunction {
    pub fn from_fn(x: &Team, f: impl Fn(&[u32]) -> u32) -> Self {
        ChoiceFunction {
            values: x.rows.iter().map(|r| (r.clone(), f(r))).collect(),
        }
    }

    /// A V-uniform function given by its value on each ~_V class.
    pub fn uniform(x: &Team, v_set: &VarSet, f: impl Fn(&[Option<u32>]) -> u32) -> Self {
        Self::from_fn(x, |r| f(&x.class_key(r, v_set)))
    }

    pub fn is_total_on(&self, x: &Team) -> bool {
        x.rows.iter().all(|r| self.values.contains_key(r))
    }
}

/// X[M/v].
pub fn duplicate(x: &Team, v: &str, m: &Structure) -> Team {
    let (vars, i, present) = x.extended(v);
    let rows = x
        .rows
        .iter()
        .flat_map(|r| (0..m.domain).map(move |a| Team::set_row(r, i, present, a)))
        .collect();
    Team { vars, rows }
}

/// X[F/v].
pub fn supplement(x: &Team, f: &ChoiceFunction, v: &str) -> Result<Team> {
    if !f.is_total_on(x) {
        return Err(Error::PartialFunction);
    }
    let (vars, i, present) = x.extended(v);
    let rows = x
        .rows
        .iter()
        .map(|r| Team::set_row(r, i, present, f.values[r]))
        .collect();
    Ok(Team { vars, rows })
}

/// Whether `f` is constant on every ~_V class of `x`.
pub fn is_uniform(f: &ChoiceFunction, x: &Team, v_set: &VarSet) -> bool {
    let mut seen: BTreeMap<Vec<Option<u32>>, u32> = BTreeMap::new();
    for r in &x.rows {
        let Some(&a) = f.values.get(r) else {
            return false;
        };
        if *seen.entry(x.class_key(r, v_set)).or_insert(a) != a {
            return false;
        }
    }
    true
}
