//! Independence-friendly logic workbench.
//!
//! Team-semantics model checking, a Skolem-function search engine, pattern
//! classification of positive initial trees, the tree rewrite calculus and
//! the NP-problem encodings, with bounded-model harnesses to cross-check
//! them.

pub mod encodings;
pub mod error;
pub mod harness;
pub mod patterns;
pub mod rewrite;
pub mod skolem;
pub mod syntax;
pub mod teams;

pub use error::{Error, Result};
