//! The shared GSMN* skeleton and its three independence procedures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::orders::{init_orders, ExamOrder, GrowOrder, PValueMatrix};
use crate::citest::{CostLedger, IndependenceEngine, Phase};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::kb::{i_fch, i_gsimn, i_gsmn_star, ClosureConfig, ForwardChainer, KnowledgeBase, Origin, SetStatement};
use crate::varset::VarSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    GsmnStar,
    GsmnStarNoprop,
    Gsimn,
    GsimnFch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::GsmnStar,
        Algorithm::GsmnStarNoprop,
        Algorithm::Gsimn,
        Algorithm::GsimnFch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GsmnStar => "gsmn-star",
            Algorithm::GsmnStarNoprop => "gsmn-star-noprop",
            Algorithm::Gsimn => "gsimn",
            Algorithm::GsimnFch => "gsimn-fch",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown algorithm `{s}`")))
    }
}

/// Output of one learner run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub graph: UndirectedGraph,
    /// Learned blanket of each variable; empty for variables never examined.
    pub blankets: Vec<VarSet>,
    pub ledger: CostLedger,
    /// Knowledge-base entries (GSIMN) or closed statements (GSIMN-FCH).
    pub kb_size: usize,
    /// Largest number of main-loop executed entries stored for one pair.
    pub max_executed_per_pair: usize,
    /// Contradictory derivations seen by the forward chainer.
    pub closure_conflicts: usize,
    /// Set when the run stopped early on a resource limit; the other fields
    /// then describe the partial run.
    pub aborted: Option<String>,
}

impl RunResult {
    pub fn completed(&self) -> bool {
        self.aborted.is_none()
    }
}

trait Procedure {
    fn propagation(&self) -> bool {
        true
    }

    fn seed(&mut self, _pv: &PValueMatrix) -> Result<()> {
        Ok(())
    }

    fn resolve(
        &mut self,
        x: usize,
        y: usize,
        s: &VarSet,
        f: &VarSet,
        t: &VarSet,
        engine: &mut IndependenceEngine,
    ) -> Result<bool>;

    fn finish(&self, _r: &mut RunResult) {}
}

struct Propagation(bool);

impl Procedure for Propagation {
    fn propagation(&self) -> bool {
        self.0
    }

    fn resolve(
        &mut self,
        x: usize,
        y: usize,
        s: &VarSet,
        f: &VarSet,
        t: &VarSet,
        engine: &mut IndependenceEngine,
    ) -> Result<bool> {
        i_gsmn_star(x, y, s, f, t, engine)
    }
}

struct Inference(KnowledgeBase);

impl Procedure for Inference {
    // The unconditional dependences stand in for the tests the first grow
    // step would repeat. Unconditional independences stay out: the p-value
    // gate already skips those pairs, and on data a false one would feed
    // the I-triangle rule.
    fn seed(&mut self, pv: &PValueMatrix) -> Result<()> {
        for x in 0..pv.n() {
            for y in x + 1..pv.n() {
                if !pv.independent(x, y) {
                    self.0.add(x, y, VarSet::EMPTY, false, Origin::Init);
                }
            }
        }
        Ok(())
    }

    fn resolve(
        &mut self,
        x: usize,
        y: usize,
        s: &VarSet,
        f: &VarSet,
        t: &VarSet,
        engine: &mut IndependenceEngine,
    ) -> Result<bool> {
        i_gsimn(x, y, s, f, t, &mut self.0, engine)
    }

    fn finish(&self, r: &mut RunResult) {
        let n = self.0.n();
        r.kb_size = self.0.total_entries();
        r.max_executed_per_pair = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .map(|(x, y)| self.0.count_origin(x, y, Origin::Executed))
            .max()
            .unwrap_or(0);
    }
}

struct Chaining(ForwardChainer);

impl Procedure for Chaining {
    fn seed(&mut self, pv: &PValueMatrix) -> Result<()> {
        for x in 0..pv.n() {
            for y in x + 1..pv.n() {
                self.0.insert(&SetStatement::pair(x, y, VarSet::EMPTY, pv.independent(x, y))?)?;
            }
        }
        self.0.close()?;
        Ok(())
    }

    fn resolve(
        &mut self,
        x: usize,
        y: usize,
        s: &VarSet,
        _f: &VarSet,
        _t: &VarSet,
        engine: &mut IndependenceEngine,
    ) -> Result<bool> {
        i_fch(x, y, s, &mut self.0, engine)
    }

    fn finish(&self, r: &mut RunResult) {
        r.kb_size = self.0.len();
        r.closure_conflicts = self.0.conflicts();
    }
}

/// Moves `x`, then `s[len-2]` down to `s[0]`, to the front of `order`, so
/// it starts with the blanket found so far followed by `x`.
pub fn promote_grow_order(order: &mut GrowOrder, x: usize, s: &[usize]) {
    order.move_to_front(x);
    if s.len() >= 2 {
        for &w in s[..s.len() - 1].iter().rev() {
            order.move_to_front(w);
        }
    }
}

/// Moves the most recently added member of `s` that is still queued to the
/// front of π.
pub fn promote_exam_order(pi: &mut ExamOrder, s: &[usize]) {
    for &w in s.iter().rev() {
        if pi.move_to_front(w) {
            break;
        }
    }
}

fn run<P: Procedure>(algorithm: Algorithm, mut engine: IndependenceEngine, mut procedure: P) -> Result<RunResult> {
    let n = engine.n_vars();
    let mut result = RunResult {
        algorithm,
        graph: UndirectedGraph::empty(n)?,
        blankets: vec![VarSet::EMPTY; n],
        ledger: CostLedger::default(),
        kb_size: 0,
        max_executed_per_pair: 0,
        closure_conflicts: 0,
        aborted: None,
    };
    let outcome = main_loop(&mut engine, &mut procedure, &mut result);
    procedure.finish(&mut result);
    match outcome {
        Ok(()) => {}
        Err(Error::Resource(msg)) => result.aborted = Some(msg),
        Err(e) => return Err(e),
    }
    result.ledger = engine.into_ledger();
    Ok(result)
}

fn main_loop<P: Procedure>(engine: &mut IndependenceEngine, procedure: &mut P, out: &mut RunResult) -> Result<()> {
    let alpha = engine.alpha();
    let (pv, mut pi, mut lambda) = init_orders(engine)?;
    procedure.seed(&pv)?;
    let mut examined = VarSet::EMPTY;
    while let Some(x) = pi.pop_front() {
        let (mut t, mut f) = (VarSet::EMPTY, VarSet::EMPTY);
        if procedure.propagation() {
            for y in examined.iter() {
                if out.blankets[y].contains(x) {
                    t.insert(y);
                } else {
                    f.insert(y);
                }
            }
            lambda[x].move_to_end(&t);
            lambda[x].move_to_end(&f);
        }

        engine.set_phase(Phase::Grow);
        let mut s: Vec<usize> = Vec::new();
        let mut s_set = VarSet::EMPTY;
        while let Some(y) = lambda[x].pop_front() {
            if pv.p(x, y) > alpha {
                continue;
            }
            if !procedure.resolve(x, y, &s_set, &f, &t, engine)? {
                s.push(y);
                s_set.insert(y);
                promote_grow_order(&mut lambda[y], x, &s);
                promote_exam_order(&mut pi, &s);
            }
        }

        engine.set_phase(Phase::Shrink);
        for &y in s.iter().rev() {
            let cond = s_set.without(y);
            if procedure.resolve(x, y, &cond, &f, &t, engine)? {
                s_set = cond;
            }
        }
        engine.set_phase(Phase::Other);

        out.blankets[x] = s_set;
        for y in s_set.iter() {
            out.graph.add_edge(x, y)?;
        }
        examined.insert(x);
    }
    Ok(())
}

/// GSMN*, with or without reuse of already-learned blankets.
pub fn run_gsmn_star(engine: IndependenceEngine, propagation: bool) -> Result<RunResult> {
    let algorithm = if propagation {
        Algorithm::GsmnStar
    } else {
        Algorithm::GsmnStarNoprop
    };
    run(algorithm, engine, Propagation(propagation))
}

/// GSMN* with Strong Union and triangle-rule inference.
pub fn run_gsimn(engine: IndependenceEngine) -> Result<RunResult> {
    let n = engine.n_vars();
    run(Algorithm::Gsimn, engine, Inference(KnowledgeBase::new(n)))
}

/// GSMN* answering from an exhaustively closed statement store.
pub fn run_gsimn_fch(engine: IndependenceEngine, config: ClosureConfig) -> Result<RunResult> {
    let chainer = ForwardChainer::new(engine.n_vars(), config)?;
    run(Algorithm::GsimnFch, engine, Chaining(chainer))
}

/// Dispatches on `algorithm` with the default closure settings.
pub fn run_algorithm(algorithm: Algorithm, engine: IndependenceEngine) -> Result<RunResult> {
    match algorithm {
        Algorithm::GsmnStar => run_gsmn_star(engine, true),
        Algorithm::GsmnStarNoprop => run_gsmn_star(engine, false),
        Algorithm::Gsimn => run_gsimn(engine),
        Algorithm::GsimnFch => run_gsimn_fch(engine, ClosureConfig::default()),
    }
}
