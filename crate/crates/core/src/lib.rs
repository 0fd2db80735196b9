//! Independence-based structure learning for Markov networks.

pub mod citest;
pub mod data;
pub mod error;
pub mod graph;
pub mod harness;
pub mod kb;
pub mod learners;
pub mod statement;
pub mod synth;
pub mod varset;

pub use error::{Error, Result};
pub use varset::VarSet;
