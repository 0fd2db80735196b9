//! Knowledge of already-resolved independences and the rules that extend it.

mod closure;
mod procedures;
mod store;

pub use closure::{ClosureConfig, ForwardChainer, Rule, SetStatement, MAX_CLOSURE_VARS};
pub use procedures::{i_fch, i_gsimn, i_gsmn_star};
pub use store::{Entry, KnowledgeBase, Origin};
