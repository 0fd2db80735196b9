use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::citest::{IndependenceEngine, Phase};
use crate::error::Result;
use crate::varset::VarSet;

/// Unconditional test results for every pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PValueMatrix {
    n: usize,
    p: Vec<f64>,
    ln_p: Vec<f64>,
    independent: Vec<bool>,
}

impl PValueMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.n + y]
    }

    pub fn ln_p(&self, x: usize, y: usize) -> f64 {
        self.ln_p[x * self.n + y]
    }

    /// The decision the test took at its significance level.
    pub fn independent(&self, x: usize, y: usize) -> bool {
        self.independent[x * self.n + y]
    }

    /// Mean log p-value of `x` against every other variable.
    pub fn mean_ln_p(&self, x: usize) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let sum: f64 = (0..self.n).filter(|&y| y != x).map(|y| self.ln_p(x, y)).sum();
        sum / (self.n - 1) as f64
    }

    /// Builds a matrix from explicit p-values; the decision is `p > alpha`.
    pub fn from_p_values(n: usize, pairs: &[(usize, usize, f64)], alpha: f64) -> Self {
        let mut m = Self {
            n,
            p: vec![1.0; n * n],
            ln_p: vec![0.0; n * n],
            independent: vec![true; n * n],
        };
        for &(x, y, p) in pairs {
            m.set(x, y, p, p.ln(), p > alpha);
        }
        m
    }

    fn set(&mut self, x: usize, y: usize, p: f64, ln_p: f64, independent: bool) {
        for (a, b) in [(x, y), (y, x)] {
            self.p[a * self.n + b] = p;
            self.ln_p[a * self.n + b] = ln_p;
            self.independent[a * self.n + b] = independent;
        }
    }
}

/// The queue π of variables still to be examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExamOrder(VecDeque<usize>);

impl ExamOrder {
    pub fn new(order: impl IntoIterator<Item = usize>) -> Self {
        Self(order.into_iter().collect())
    }

    pub fn pop_front(&mut self) -> Option<usize> {
        self.0.pop_front()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// Moves `v` to the front if it is still queued.
    pub fn move_to_front(&mut self, v: usize) -> bool {
        match self.0.iter().position(|&u| u == v) {
            Some(i) => {
                self.0.remove(i);
                self.0.push_front(v);
                true
            }
            None => false,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The order λ in which one variable's grow phase visits candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowOrder(VecDeque<usize>);

impl GrowOrder {
    pub fn new(order: impl IntoIterator<Item = usize>) -> Self {
        Self(order.into_iter().collect())
    }

    pub fn pop_front(&mut self) -> Option<usize> {
        self.0.pop_front()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn move_to_front(&mut self, v: usize) -> bool {
        match self.0.iter().position(|&u| u == v) {
            Some(i) => {
                self.0.remove(i);
                self.0.push_front(v);
                true
            }
            None => false,
        }
    }

    /// Moves every member of `set` to the back, keeping their relative order.
    pub fn move_to_end(&mut self, set: &VarSet) {
        let (keep, moved): (VecDeque<usize>, VecDeque<usize>) =
            self.0.iter().partition(|&&v| !set.contains(v));
        self.0 = keep;
        self.0.extend(moved);
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn ascending_by(key: impl Fn(usize) -> f64) -> impl Fn(&usize, &usize) -> Ordering {
    move |&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b))
}

/// π: lowest mean log p-value first. λ_X: strongest dependence on X first.
/// Ties go to the lower index.
pub fn orders_from_p_values(pv: &PValueMatrix) -> (ExamOrder, Vec<GrowOrder>) {
    let n = pv.n();
    let mut pi: Vec<usize> = (0..n).collect();
    pi.sort_by(ascending_by(|x| pv.mean_ln_p(x)));
    let grow = (0..n)
        .map(|x| {
            let mut l: Vec<usize> = (0..n).filter(|&y| y != x).collect();
            l.sort_by(ascending_by(|y| pv.p(x, y)));
            GrowOrder::new(l)
        })
        .collect();
    (ExamOrder::new(pi), grow)
}

/// Runs every unconditional test (phase `Init`) and derives the orders.
pub fn init_orders(engine: &mut IndependenceEngine) -> Result<(PValueMatrix, ExamOrder, Vec<GrowOrder>)> {
    let n = engine.n_vars();
    let mut pv = PValueMatrix::from_p_values(n, &[], 0.0);
    let saved = engine.phase();
    engine.set_phase(Phase::Init);
    for x in 0..n {
        for y in x + 1..n {
            let out = engine.execute(x, y, &VarSet::EMPTY)?;
            pv.set(x, y, out.p_value, out.ln_p_value, out.independent);
        }
    }
    engine.set_phase(saved);
    let (pi, grow) = orders_from_p_values(&pv);
    Ok((pv, pi, grow))
}
