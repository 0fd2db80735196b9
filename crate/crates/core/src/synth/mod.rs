//! Ground-truth models and synthetic data.

mod bn;
mod mn;
mod structure;

pub use bn::{logic_sample, moralize, BNModel};
pub use mn::{build_mn, gibbs_sample, GibbsConfig, MNModel};
pub use structure::random_structure;
