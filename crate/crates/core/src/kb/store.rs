use serde::{Deserialize, Serialize};

use crate::varset::VarSet;

/// How an entry entered the knowledge base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// Unconditional test run while computing the ordering heuristics.
    Init,
    /// Test executed by the learner's main loop.
    Executed,
    /// Produced by a triangle rule.
    Inferred,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub cond: VarSet,
    pub origin: Origin,
}

#[derive(Clone, Debug, Default)]
struct PairCell {
    dependences: Vec<Entry>,
    independences: Vec<Entry>,
}

/// Known (in)dependences per unordered variable pair, as two lists of
/// conditioning sets. Lookups are by pair, so every query touches only the
/// handful of sets recorded for that pair.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    n: usize,
    cells: Vec<PairCell>,
}

impl KnowledgeBase {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            cells: vec![PairCell::default(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, x: usize, y: usize) -> usize {
        debug_assert!(x != y && x < self.n && y < self.n);
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        a * self.n + b
    }

    /// Records `(x ⊥ y | cond)` or its negation; duplicates are ignored.
    /// Returns whether the entry was new.
    pub fn add(&mut self, x: usize, y: usize, cond: VarSet, independent: bool, origin: Origin) -> bool {
        debug_assert!(!cond.contains(x) && !cond.contains(y));
        let i = self.idx(x, y);
        let list = if independent {
            &mut self.cells[i].independences
        } else {
            &mut self.cells[i].dependences
        };
        if list.iter().any(|e| e.cond == cond) {
            return false;
        }
        list.push(Entry { cond, origin });
        true
    }

    /// Exact-match lookup. A pair holding both values for the same set
    /// (possible only with unreliable data) reports the dependence.
    pub fn query_exact(&self, x: usize, y: usize, cond: &VarSet) -> Option<bool> {
        let c = &self.cells[self.idx(x, y)];
        if c.dependences.iter().any(|e| e.cond == *cond) {
            Some(false)
        } else if c.independences.iter().any(|e| e.cond == *cond) {
            Some(true)
        } else {
            None
        }
    }

    pub fn dependences(&self, x: usize, y: usize) -> &[Entry] {
        &self.cells[self.idx(x, y)].dependences
    }

    pub fn independences(&self, x: usize, y: usize) -> &[Entry] {
        &self.cells[self.idx(x, y)].independences
    }

    /// Entries of the pair with the given origin, both values.
    pub fn count_origin(&self, x: usize, y: usize, origin: Origin) -> usize {
        let c = &self.cells[self.idx(x, y)];
        c.dependences
            .iter()
            .chain(&c.independences)
            .filter(|e| e.origin == origin)
            .count()
    }

    pub fn len(&self, x: usize, y: usize) -> usize {
        let c = &self.cells[self.idx(x, y)];
        c.dependences.len() + c.independences.len()
    }

    pub fn total_entries(&self) -> usize {
        self.cells
            .iter()
            .map(|c| c.dependences.len() + c.independences.len())
            .sum()
    }

    /// D-SU: a stored `(x ⊥̸ y | A)` with `A ⊇ s` gives `(x ⊥̸ y | s)`.
    pub fn dependence_by_strong_union(&self, x: usize, y: usize, s: &VarSet) -> bool {
        self.dependences(x, y).iter().any(|e| e.cond.is_superset(s))
    }

    /// I-SU: a stored `(x ⊥ y | A)` with `A ⊆ s` gives `(x ⊥ y | s)`.
    pub fn independence_by_strong_union(&self, x: usize, y: usize, s: &VarSet) -> bool {
        self.independences(x, y).iter().any(|e| e.cond.is_subset(s))
    }

    /// D-triangle: `(x ⊥̸ w | A)` and `(w ⊥̸ y | B)` with `A, B ⊇ s` give
    /// `(x ⊥̸ y | A ∩ B)`. Middle variables are tried in ascending order;
    /// the first match is recorded and its conditioning set returned.
    pub fn dependence_by_triangle(&mut self, x: usize, y: usize, s: &VarSet) -> Option<VarSet> {
        let found = (0..self.n).filter(|&w| w != x && w != y).find_map(|w| {
            let a = self
                .dependences(x, w)
                .iter()
                .find(|e| e.cond.is_superset(s))?;
            let b = self
                .dependences(w, y)
                .iter()
                .find(|e| e.cond.is_superset(s))?;
            Some(a.cond.intersection(&b.cond))
        })?;
        self.add(x, y, found, false, Origin::Inferred);
        Some(found)
    }

    /// I-triangle: `(x ⊥ w | A)` with `A ⊆ s` and `(w ⊥̸ y | B)` with
    /// `B ⊇ A` give `(x ⊥ y | A)`. Recorded like the D-triangle.
    pub fn independence_by_triangle(&mut self, x: usize, y: usize, s: &VarSet) -> Option<VarSet> {
        let found = (0..self.n).filter(|&w| w != x && w != y).find_map(|w| {
            self.independences(x, w)
                .iter()
                .filter(|a| a.cond.is_subset(s))
                .find(|a| {
                    self.dependences(w, y)
                        .iter()
                        .any(|b| b.cond.is_superset(&a.cond))
                })
                .map(|a| a.cond)
        })?;
        self.add(x, y, found, true, Origin::Inferred);
        Some(found)
    }

    /// Strong Union in both directions, dependence first.
    pub fn infer_strong_union(&self, x: usize, y: usize, s: &VarSet) -> Option<bool> {
        if self.dependence_by_strong_union(x, y, s) {
            Some(false)
        } else if self.independence_by_strong_union(x, y, s) {
            Some(true)
        } else {
            None
        }
    }

    /// Both triangle rules, D-triangle first. Conclusions are recorded.
    pub fn infer_triangle(&mut self, x: usize, y: usize, s: &VarSet) -> Option<bool> {
        if self.dependence_by_triangle(x, y, s).is_some() {
            Some(false)
        } else if self.independence_by_triangle(x, y, s).is_some() {
            Some(true)
        } else {
            None
        }
    }
}
