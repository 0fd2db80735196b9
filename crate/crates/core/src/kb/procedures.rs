//! The three ways a learner resolves a single independence query.

use super::closure::{ForwardChainer, SetStatement};
use super::store::{KnowledgeBase, Origin};
use crate::citest::IndependenceEngine;
use crate::error::Result;
use crate::statement::{CIStatement, Provenance};
use crate::varset::VarSet;

fn resolved(engine: &mut IndependenceEngine, x: usize, y: usize, s: &VarSet, v: bool, p: Provenance) -> Result<bool> {
    engine.record_inferred(&CIStatement::new(x, y, *s, v, p))?;
    Ok(v)
}

/// Answers from the blankets already learned, else runs the test.
/// `t` holds examined variables whose blanket contains `x`, `f` the rest.
pub fn i_gsmn_star(
    x: usize,
    y: usize,
    s: &VarSet,
    f: &VarSet,
    t: &VarSet,
    engine: &mut IndependenceEngine,
) -> Result<bool> {
    if t.contains(y) {
        return resolved(engine, x, y, s, false, Provenance::Propagated);
    }
    if f.contains(y) {
        return resolved(engine, x, y, s, true, Provenance::Propagated);
    }
    engine.execute_test(x, y, s)
}

/// Propagation, then Strong Union and the triangle rules (dependences
/// first), then the test itself. Executed results join the knowledge base.
pub fn i_gsimn(
    x: usize,
    y: usize,
    s: &VarSet,
    f: &VarSet,
    t: &VarSet,
    kb: &mut KnowledgeBase,
    engine: &mut IndependenceEngine,
) -> Result<bool> {
    if t.contains(y) {
        return resolved(engine, x, y, s, false, Provenance::Propagated);
    }
    if f.contains(y) {
        return resolved(engine, x, y, s, true, Provenance::Propagated);
    }
    if kb.dependence_by_strong_union(x, y, s) {
        return resolved(engine, x, y, s, false, Provenance::InferredStrongUnion);
    }
    if kb.dependence_by_triangle(x, y, s).is_some() {
        return resolved(engine, x, y, s, false, Provenance::InferredTriangle);
    }
    if kb.independence_by_strong_union(x, y, s) {
        return resolved(engine, x, y, s, true, Provenance::InferredStrongUnion);
    }
    if kb.independence_by_triangle(x, y, s).is_some() {
        return resolved(engine, x, y, s, true, Provenance::InferredTriangle);
    }
    let v = engine.execute_test(x, y, s)?;
    kb.add(x, y, *s, v, Origin::Executed);
    Ok(v)
}

/// Exact lookup in a closed statement store; on a miss the test runs and
/// its result is chained to a new fixpoint.
pub fn i_fch(
    x: usize,
    y: usize,
    s: &VarSet,
    store: &mut ForwardChainer,
    engine: &mut IndependenceEngine,
) -> Result<bool> {
    if let Some(v) = store.get_pair(x, y, s) {
        return resolved(engine, x, y, s, v, Provenance::InferredClosure);
    }
    let v = engine.execute_test(x, y, s)?;
    store.assert_and_close(&SetStatement::pair(x, y, *s, v)?)?;
    Ok(v)
}
