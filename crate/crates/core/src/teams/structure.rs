use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// `None` only for an empty relation read from a file without an
    /// explicit arity; such a relation is compatible with any arity.
    pub arity: Option<usize>,
    pub tuples: BTreeSet<Vec<u32>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity: Some(arity),
            tuples: BTreeSet::new(),
        }
    }

    pub fn with_tuples(arity: usize, tuples: impl IntoIterator<Item = Vec<u32>>) -> Self {
        Relation {
            arity: Some(arity),
            tuples: tuples.into_iter().collect(),
        }
    }
}

/// Finite relational structure over `0..domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub domain: u32,
    pub relations: BTreeMap<String, Relation>,
    pub constants: BTreeMap<String, u32>,
}

impl Structure {
    pub fn new(domain: u32) -> Self {
        Structure {
            domain,
            relations: BTreeMap::new(),
            constants: BTreeMap::new(),
        }
    }

    pub fn with_relation(mut self, name: &str, rel: Relation) -> Self {
        self.relations.insert(name.to_string(), rel);
        self
    }

    pub fn with_constant(mut self, name: &str, elem: u32) -> Self {
        self.constants.insert(name.to_string(), elem);
        self
    }

    pub fn constant_names(&self) -> BTreeSet<String> {
        self.constants.keys().cloned().collect()
    }

    pub fn holds(&self, rel: &str, args: &[u32]) -> bool {
        self.relations
            .get(rel)
            .is_some_and(|r| r.tuples.contains(args))
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain == 0 {
            return Err(Error::Input("domain must be nonempty".into()));
        }
        for (name, r) in &self.relations {
            for t in &r.tuples {
                if r.arity.is_some_and(|k| k != t.len()) {
                    return Err(Error::Input(format!(
                        "relation {name}: tuple of wrong arity"
                    )));
                }
                if t.iter().any(|&e| e >= self.domain) {
                    return Err(Error::Input(format!(
                        "relation {name}: element out of range"
                    )));
                }
            }
        }
        if let Some((c, _)) = self.constants.iter().find(|(_, &e)| e >= self.domain) {
            return Err(Error::Input(format!("constant {c}: element out of range")));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Structure =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("structure: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct RawStructure {
    domain: u32,
    #[serde(default)]
    relations: BTreeMap<String, Value>,
    #[serde(default)]
    constants: BTreeMap<String, u32>,
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let relations = self
            .relations
            .iter()
            .map(|(k, r)| {
                let tuples = serde_json::to_value(&r.tuples).expect("tuples serialize");
                let v = if r.tuples.is_empty() {
                    match r.arity {
                        Some(k) => serde_json::json!({ "arity": k, "tuples": [] }),
                        None => serde_json::json!([]),
                    }
                } else {
                    tuples
                };
                (k.clone(), v)
            })
            .collect();
        RawStructure {
            domain: self.domain,
            relations,
            constants: self.constants.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawStructure::deserialize(d)?;
        let mut relations = BTreeMap::new();
        for (name, v) in raw.relations {
            let (declared, tuples): (Option<usize>, Vec<Vec<u32>>) = match v {
                Value::Array(_) => (None, serde_json::from_value(v).map_err(D::Error::custom)?),
                Value::Object(ref m) => {
                    let arity = m.get("arity").and_then(Value::as_u64).map(|a| a as usize);
                    let tuples = m.get("tuples").cloned().unwrap_or(Value::Array(vec![]));
                    (
                        arity,
                        serde_json::from_value(tuples).map_err(D::Error::custom)?,
                    )
                }
                _ => {
                    return Err(D::Error::custom(format!(
                        "relation {name}: expected a list"
                    )))
                }
            };
            let mut arity = declared;
            for t in &tuples {
                match arity {
                    None => arity = Some(t.len()),
                    Some(k) if k != t.len() => {
                        return Err(D::Error::custom(format!("relation {name}: mixed arities")))
                    }
                    _ => {}
                }
            }
            relations.insert(
                name,
                Relation {
                    arity,
                    tuples: tuples.into_iter().collect(),
                },
            );
        }
        Ok(Structure {
            domain: raw.domain,
            relations,
            constants: raw.constants,
        })
    }
}
