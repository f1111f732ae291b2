//! Lax team semantics: teams, uniform choice functions, ⊨ and ⊨⁻, and
//! three-valued truth of sentences.

mod eval;
mod structure;
mod team;

use serde::{Deserialize, Serialize};

pub use eval::{
    neg_satisfies, neg_satisfies_with, satisfies, satisfies_with, DisjunctionMode, EvalOptions,
};
pub use structure::{Relation, Structure};
pub use team::{duplicate, is_uniform, supplement, ChoiceFunction, Team};

use crate::error::{Error, Result};
use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TruthValue {
    True,
    False,
    Undetermined,
}

/// Errors unless every variable in a term position is bound or names a
/// constant of `m`.
pub(crate) fn check_closed(m: &Structure, f: &Formula) -> Result<()> {
    let open: Vec<String> = f
        .free_term_vars()
        .into_iter()
        .filter(|v| !m.constants.contains_key(v))
        .collect();
    if open.is_empty() {
        Ok(())
    } else {
        Err(Error::Open(open))
    }
}

pub fn truth_value(m: &Structure, sentence: &Formula) -> Result<TruthValue> {
    truth_value_with(m, sentence, EvalOptions::default())
}

pub fn truth_value_with(
    m: &Structure,
    sentence: &Formula,
    opts: EvalOptions,
) -> Result<TruthValue> {
    check_closed(m, sentence)?;
    let unit = Team::unit();
    if satisfies_with(m, &unit, sentence, opts)? {
        return Ok(TruthValue::True);
    }
    if neg_satisfies_with(m, &unit, sentence, opts)? {
        return Ok(TruthValue::False);
    }
    Ok(TruthValue::Undetermined)
}
