//! Forward chaining over set-valued independence statements.
//!
//! Every statement `(X ⊥ Y | Z)` with `X, Y, Z` pairwise disjoint and `X, Y`
//! nonempty gets one byte in a dense table indexed by the base-4 role of
//! each variable (absent, X side, Y side, conditioning). Symmetry is built
//! into the index: the side holding the lowest endpoint variable is always
//! stored as X. The closure is a semi-naive worklist: each new statement is
//! combined once with everything already known, using the graphoid rules and
//! all their contrapositives as unit resolution.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::varset::VarSet;

/// Largest domain the dense statement table supports (4^13 bytes).
pub const MAX_CLOSURE_VARS: usize = 13;

/// An independence statement between variable sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetStatement {
    pub xs: VarSet,
    pub ys: VarSet,
    pub cond: VarSet,
    pub independent: bool,
}

impl SetStatement {
    pub fn new(xs: VarSet, ys: VarSet, cond: VarSet, independent: bool) -> Result<Self> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Input("statement sides must be nonempty".into()));
        }
        if !xs.is_disjoint(&ys) || !xs.is_disjoint(&cond) || !ys.is_disjoint(&cond) {
            return Err(Error::Input("statement sets must be pairwise disjoint".into()));
        }
        Ok(Self {
            xs,
            ys,
            cond,
            independent,
        })
    }

    pub fn pair(x: usize, y: usize, cond: VarSet, independent: bool) -> Result<Self> {
        Self::new(VarSet::singleton(x), VarSet::singleton(y), cond, independent)
    }
}

impl fmt::Display for SetStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.independent { "⊥" } else { "⊥̸" };
        write!(f, "({} {rel} {} | {})", self.xs, self.ys, self.cond)
    }
}

/// The rule that first produced a statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[repr(u8)]
pub enum Rule {
    Given = 1,
    Decomposition,
    Composition,
    StrongUnion,
    Intersection,
    Transitivity,
    DecompositionContra,
    CompositionContra,
    StrongUnionContra,
    IntersectionContra,
    TransitivityContra,
}

impl Rule {
    const ALL: [Rule; 11] = [
        Rule::Given,
        Rule::Decomposition,
        Rule::Composition,
        Rule::StrongUnion,
        Rule::Intersection,
        Rule::Transitivity,
        Rule::DecompositionContra,
        Rule::CompositionContra,
        Rule::StrongUnionContra,
        Rule::IntersectionContra,
        Rule::TransitivityContra,
    ];

    fn from_code(c: u8) -> Rule {
        Self::ALL[c as usize - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Abort with a resource error once this many statements are known.
    pub max_statements: usize,
    /// Statements with a side larger than this are neither stored nor
    /// derived. `None` allows any size.
    pub max_endpoint_size: Option<usize>,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        Self {
            max_statements: 200_000_000,
            max_endpoint_size: None,
        }
    }
}

const IND: u8 = 1;
const DEP: u8 = 2;
const VALUE_MASK: u8 = 3;

/// A closed (or closing) store of set statements over `n` variables.
#[derive(Clone)]
pub struct ForwardChainer {
    n: usize,
    full: u32,
    states: Vec<u8>,
    spread: Vec<u32>,
    queue: VecDeque<(u32, u32, u32)>,
    known: usize,
    conflicts: usize,
    config: ClosureConfig,
}

impl fmt::Debug for ForwardChainer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ForwardChainer")
            .field("n", &self.n)
            .field("known", &self.known)
            .field("pending", &self.queue.len())
            .field("conflicts", &self.conflicts)
            .finish()
    }
}

/// Iterates the nonempty submasks of `m`, largest first.
fn submasks(m: u32) -> impl Iterator<Item = u32> {
    let mut s = m;
    let mut done = m == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = s;
        s = (s - 1) & m;
        if s == 0 {
            done = true;
        }
        Some(cur)
    })
}

fn bits(m: u32) -> impl Iterator<Item = u32> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let b = rest & rest.wrapping_neg();
        rest ^= b;
        Some(b)
    })
}

fn to_mask(v: &VarSet) -> u32 {
    v.iter().fold(0, |m, i| m | (1 << i))
}

fn to_varset(m: u32) -> VarSet {
    (0..32).filter(|i| m >> i & 1 == 1).map(|i| i as usize).collect()
}

impl ForwardChainer {
    pub fn new(n: usize, config: ClosureConfig) -> Result<Self> {
        if n > MAX_CLOSURE_VARS {
            return Err(Error::Resource(format!(
                "forward chaining supports at most {MAX_CLOSURE_VARS} variables, got {n}"
            )));
        }
        let size = 1usize << (2 * n);
        let spread = (0..1u32 << n)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| 1u32 << (2 * i)).sum())
            .collect();
        Ok(Self {
            n,
            full: ((1u64 << n) - 1) as u32,
            states: vec![0; size],
            spread,
            queue: VecDeque::new(),
            known: 0,
            conflicts: 0,
            config,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of statements known, counting each symmetric pair once.
    pub fn len(&self) -> usize {
        self.known
    }

    pub fn is_empty(&self) -> bool {
        self.known == 0
    }

    /// Derivations that contradicted an already-known statement. The first
    /// value is kept. Always zero for statements drawn from one graph.
    pub fn conflicts(&self) -> usize {
        self.conflicts
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    #[inline]
    fn index(&self, x: u32, y: u32, z: u32) -> usize {
        let (x, y) = if x.trailing_zeros() < y.trailing_zeros() { (x, y) } else { (y, x) };
        let s = &self.spread;
        (s[x as usize] + 2 * s[y as usize] + 3 * s[z as usize]) as usize
    }

    #[inline]
    fn value(&self, x: u32, y: u32, z: u32) -> u8 {
        self.states[self.index(x, y, z)] & VALUE_MASK
    }

    fn check(&self, s: &SetStatement) -> Result<()> {
        let bound = s.xs.union(&s.ys).union(&s.cond).upper_bound();
        if bound > self.n {
            return Err(Error::Input(format!(
                "statement {s} mentions a variable outside 0..{}",
                self.n
            )));
        }
        Ok(())
    }

    /// Known value of the statement, if any.
    pub fn get(&self, xs: &VarSet, ys: &VarSet, cond: &VarSet) -> Option<bool> {
        let (x, y, z) = (to_mask(xs), to_mask(ys), to_mask(cond));
        if x == 0 || y == 0 || x & y != 0 || (x | y) & z != 0 || (x | y | z) & !self.full != 0 {
            return None;
        }
        match self.value(x, y, z) {
            IND => Some(true),
            DEP => Some(false),
            _ => None,
        }
    }

    pub fn get_pair(&self, x: usize, y: usize, cond: &VarSet) -> Option<bool> {
        self.get(&VarSet::singleton(x), &VarSet::singleton(y), cond)
    }

    /// The rule that produced a known statement.
    pub fn provenance(&self, s: &SetStatement) -> Option<Rule> {
        let (x, y, z) = (to_mask(&s.xs), to_mask(&s.ys), to_mask(&s.cond));
        let st = self.states[self.index(x, y, z)];
        (st & VALUE_MASK != 0).then(|| Rule::from_code(st >> 2))
    }

    /// Adds a statement without closing. Returns whether it was new.
    pub fn insert(&mut self, s: &SetStatement) -> Result<bool> {
        self.check(s)?;
        let (x, y, z) = (to_mask(&s.xs), to_mask(&s.ys), to_mask(&s.cond));
        Ok(self.add(x, y, z, s.independent, Rule::Given))
    }

    fn add(&mut self, x: u32, y: u32, z: u32, independent: bool, rule: Rule) -> bool {
        if let Some(k) = self.config.max_endpoint_size {
            if x.count_ones() as usize > k || y.count_ones() as usize > k {
                return false;
            }
        }
        let i = self.index(x, y, z);
        let v = if independent { IND } else { DEP };
        let st = self.states[i];
        if st != 0 {
            if st & VALUE_MASK != v {
                self.conflicts += 1;
            }
            return false;
        }
        self.states[i] = v | (rule as u8) << 2;
        self.known += 1;
        self.queue.push_back((x, y, z));
        true
    }

    /// Runs the worklist to a fixpoint. Returns the number of statements
    /// added, or a resource error once the ceiling is passed (the store then
    /// holds everything derived so far).
    pub fn close(&mut self) -> Result<usize> {
        let before = self.known;
        while let Some((x, y, z)) = self.queue.pop_front() {
            let independent = self.value(x, y, z) == IND;
            for (a, b) in [(x, y), (y, x)] {
                if independent {
                    self.fire_independence(a, b, z);
                } else {
                    self.fire_dependence(a, b, z);
                }
            }
            if self.known > self.config.max_statements {
                return Err(Error::Resource(format!(
                    "closure exceeded {} statements",
                    self.config.max_statements
                )));
            }
        }
        Ok(self.known - before)
    }

    /// Inserts and closes.
    pub fn assert_and_close(&mut self, s: &SetStatement) -> Result<usize> {
        self.insert(s)?;
        self.close()
    }

    /// Consequences of `(a ⊥ b | z)` with `a` in the X role.
    fn fire_independence(&mut self, a: u32, b: u32, z: u32) {
        let rest = self.full & !(a | b | z);
        // strong union
        for w in bits(rest) {
            self.add(a, b, z | w, true, Rule::StrongUnion);
        }
        // decomposition, one variable at a time
        if b.count_ones() > 1 {
            for v in bits(b) {
                self.add(a, b & !v, z, true, Rule::Decomposition);
            }
        }
        // composition with a known singleton partner
        for w in bits(rest) {
            if self.value(a, w, z) == IND {
                self.add(a, b | w, z, true, Rule::Composition);
            }
        }
        // composition with this statement as the singleton partner
        if b.count_ones() == 1 {
            for u in submasks(rest) {
                if self.value(a, u, z) == IND {
                    self.add(a, u | b, z, true, Rule::Composition);
                }
            }
        }
        for w in submasks(z) {
            let zr = z & !w;
            // intersection: (a ⊥ b | zr ∪ w) ∧ (a ⊥ w | zr ∪ b)
            if self.value(a, w, zr | b) == IND {
                self.add(a, b | w, zr, true, Rule::Intersection);
            }
            // (a ⊥̸ b ∪ w | zr) ∧ (a ⊥ b | zr ∪ w) ⇒ (a ⊥̸ w | zr ∪ b)
            if self.value(a, b | w, zr) == DEP {
                self.add(a, w, zr | b, false, Rule::IntersectionContra);
            }
        }
        for w in submasks(rest) {
            // (a ⊥̸ b ∪ w | z) ∧ (a ⊥ b | z) ⇒ (a ⊥̸ w | z)
            if self.value(a, b | w, z) == DEP {
                self.add(a, w, z, false, Rule::CompositionContra);
            }
        }
        // transitivity: (a ⊥ b | z) ∧ (a ⊥̸ γ | z) ⇒ (γ ⊥ b | z)
        for g in bits(rest) {
            if self.value(a, g, z) == DEP {
                self.add(g, b, z, true, Rule::Transitivity);
            }
        }
    }

    /// Consequences of `(a ⊥̸ b | z)` with `a` in the X role.
    fn fire_dependence(&mut self, a: u32, b: u32, z: u32) {
        let rest = self.full & !(a | b | z);
        for v in bits(z) {
            self.add(a, b, z & !v, false, Rule::StrongUnionContra);
        }
        for w in bits(rest) {
            self.add(a, b | w, z, false, Rule::DecompositionContra);
        }
        if b.count_ones() > 1 {
            for y in submasks(b).filter(|&y| y != b) {
                let w = b & !y;
                if self.value(a, y, z) == IND {
                    self.add(a, w, z, false, Rule::CompositionContra);
                }
                if self.value(a, y, z | w) == IND {
                    self.add(a, w, z | y, false, Rule::IntersectionContra);
                }
            }
        }
        if b.count_ones() == 1 {
            // b plays the middle variable γ
            for u in submasks(rest) {
                if self.value(a, u, z) == IND {
                    self.add(b, u, z, true, Rule::Transitivity);
                }
                if self.value(b, u, z) == DEP {
                    self.add(a, u, z, false, Rule::TransitivityContra);
                }
            }
        }
    }

    /// Every known statement, in index order, X side holding the lowest
    /// endpoint variable.
    pub fn statements(&self) -> impl Iterator<Item = SetStatement> + '_ {
        self.states.iter().enumerate().filter(|(_, &st)| st != 0).map(move |(i, &st)| {
            let (mut x, mut y, mut z) = (0u32, 0u32, 0u32);
            for v in 0..self.n {
                match (i >> (2 * v)) & 3 {
                    1 => x |= 1 << v,
                    2 => y |= 1 << v,
                    3 => z |= 1 << v,
                    _ => {}
                }
            }
            SetStatement {
                xs: to_varset(x),
                ys: to_varset(y),
                cond: to_varset(z),
                independent: st & VALUE_MASK == IND,
            }
        })
    }
}
