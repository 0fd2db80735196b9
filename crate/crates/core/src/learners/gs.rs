//! Grow-shrink blanket discovery with restarts, one variable at a time.

use super::orders::GrowOrder;
use crate::citest::{IndependenceEngine, Phase};
use crate::error::Result;
use crate::graph::UndirectedGraph;
use crate::varset::VarSet;

/// Blanket of `x`. The grow loop rescans `order` from the start after each
/// addition; the shrink loop rescans the blanket after each removal.
pub fn gs_blanket(x: usize, engine: &mut IndependenceEngine, order: &GrowOrder) -> Result<VarSet> {
    let mut s = VarSet::EMPTY;
    engine.set_phase(Phase::Grow);
    'grow: loop {
        for y in order.iter().filter(|&y| y != x) {
            if !s.contains(y) && !engine.execute_test(x, y, &s)? {
                s.insert(y);
                continue 'grow;
            }
        }
        break;
    }
    engine.set_phase(Phase::Shrink);
    'shrink: loop {
        for y in s.iter() {
            if engine.execute_test(x, y, &s.without(y))? {
                s.remove(y);
                continue 'shrink;
            }
        }
        break;
    }
    engine.set_phase(Phase::Other);
    Ok(s)
}

/// Learns every blanket independently and joins them into a graph; `orders`
/// defaults to ascending index order.
pub fn gsmn_abstract(engine: &mut IndependenceEngine, orders: Option<&[GrowOrder]>) -> Result<UndirectedGraph> {
    let n = engine.n_vars();
    let mut g = UndirectedGraph::empty(n)?;
    for x in 0..n {
        let b = match orders {
            Some(o) => gs_blanket(x, engine, &o[x])?,
            None => gs_blanket(x, engine, &GrowOrder::new(0..n))?,
        };
        for y in b.iter() {
            g.add_edge(x, y)?;
        }
    }
    Ok(g)
}
