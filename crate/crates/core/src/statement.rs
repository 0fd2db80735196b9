use std::fmt;

use serde::{Deserialize, Serialize};

use crate::varset::VarSet;

/// How the value of a conditional-independence statement was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Answered by the backend (separation oracle or a statistical test).
    Executed,
    /// Strong Union, direct (independence) or contrapositive (dependence).
    InferredStrongUnion,
    /// D-triangle or I-triangle rule.
    InferredTriangle,
    /// Found in a store closed under the full axiom set.
    InferredClosure,
    /// Settled by an already-computed blanket.
    Propagated,
}

impl Provenance {
    pub fn is_inferred(self) -> bool {
        matches!(
            self,
            Provenance::InferredStrongUnion | Provenance::InferredTriangle | Provenance::InferredClosure
        )
    }
}

/// `(x ⊥ y | cond)` when `independent`, `(x ⊥̸ y | cond)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CIStatement {
    pub x: usize,
    pub y: usize,
    pub cond: VarSet,
    pub independent: bool,
    pub provenance: Provenance,
}

impl CIStatement {
    pub fn new(x: usize, y: usize, cond: VarSet, independent: bool, provenance: Provenance) -> Self {
        debug_assert!(x != y, "statement endpoints must differ");
        debug_assert!(!cond.contains(x) && !cond.contains(y));
        Self {
            x,
            y,
            cond,
            independent,
            provenance,
        }
    }

    /// Test weight `2 + |cond|`.
    pub fn weight(&self) -> u64 {
        2 + self.cond.len() as u64
    }

    /// Same statement with endpoints ordered `x < y`.
    pub fn canonical(&self) -> Self {
        if self.x <= self.y {
            *self
        } else {
            Self {
                x: self.y,
                y: self.x,
                ..*self
            }
        }
    }

    /// Equality up to endpoint order.
    pub fn same_triplet(&self, other: &CIStatement) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.x == b.x && a.y == b.y && a.cond == b.cond
    }
}

impl fmt::Display for CIStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.independent { "⊥" } else { "⊥̸" };
        write!(f, "({} {} {} | {})", self.x, rel, self.y, self.cond)
    }
}
