//! Conditional-independence tests and their cost accounting.

mod chisq;
mod contingency;
mod engine;
mod ledger;

pub use chisq::{chi_square_sf, chi_square_test, ln_chi_square_sf, ln_gamma_q, ChiSquare, TestOutcome};
pub use contingency::{ContingencyTable, Slice};
pub use engine::{Backend, IndependenceEngine, DEFAULT_ALPHA, ORACLE_DEPENDENT_LN_P};
pub use ledger::{CostLedger, Phase, TraceRecord};
