use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::statement::{CIStatement, Provenance};
use crate::varset::VarSet;

/// Which part of a learner asked the query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Init,
    Grow,
    Shrink,
    #[default]
    Other,
}

/// One resolved independence query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub x: usize,
    pub y: usize,
    pub cond: VarSet,
    pub independent: bool,
    pub provenance: Provenance,
    /// `2 + |cond|` for executed tests, zero otherwise.
    pub weight: u64,
    pub phase: Phase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reliable: Option<bool>,
}

/// Running account of how independence queries were answered.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    pub executed_count: u64,
    pub inferred_count: u64,
    pub propagated_count: u64,
    pub weighted_cost: u64,
    pub unreliable_count: u64,
    pub trace: Vec<TraceRecord>,
}

impl CostLedger {
    pub fn record_executed(&mut self, s: &CIStatement, phase: Phase, p_value: Option<f64>, reliable: Option<bool>) {
        debug_assert_eq!(s.provenance, Provenance::Executed);
        let weight = s.weight();
        self.executed_count += 1;
        self.weighted_cost += weight;
        if reliable == Some(false) {
            self.unreliable_count += 1;
        }
        self.trace.push(TraceRecord {
            x: s.x,
            y: s.y,
            cond: s.cond,
            independent: s.independent,
            provenance: s.provenance,
            weight,
            phase,
            p_value,
            reliable,
        });
    }

    /// Records a non-executed resolution; contributes no weight.
    pub fn record_free(&mut self, s: &CIStatement, phase: Phase) {
        debug_assert_ne!(s.provenance, Provenance::Executed);
        if s.provenance == Provenance::Propagated {
            self.propagated_count += 1;
        } else {
            self.inferred_count += 1;
        }
        self.trace.push(TraceRecord {
            x: s.x,
            y: s.y,
            cond: s.cond,
            independent: s.independent,
            provenance: s.provenance,
            weight: 0,
            phase,
            p_value: None,
            reliable: None,
        });
    }

    pub fn resolutions(&self) -> u64 {
        self.executed_count + self.inferred_count + self.propagated_count
    }

    /// Executed-test weight outside the initialization phase.
    pub fn main_loop_cost(&self) -> u64 {
        self.trace
            .iter()
            .filter(|r| r.phase != Phase::Init)
            .map(|r| r.weight)
            .sum()
    }

    /// Line-delimited JSON, one record per resolved query.
    pub fn write_trace<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.trace {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stmt(cond: &[usize], prov: Provenance) -> CIStatement {
        CIStatement::new(0, 1, VarSet::from(cond), true, prov)
    }

    #[test]
    fn weights_accumulate_only_for_executed() {
        let mut l = CostLedger::default();
        for cond in [&[][..], &[2], &[2, 3, 4]] {
            l.record_executed(&stmt(cond, Provenance::Executed), Phase::Grow, None, None);
        }
        assert_eq!(l.weighted_cost, 2 + 3 + 5);
        l.record_free(&stmt(&[2], Provenance::InferredTriangle), Phase::Grow);
        l.record_free(&stmt(&[2], Provenance::Propagated), Phase::Grow);
        assert_eq!(l.weighted_cost, 10);
        assert_eq!((l.executed_count, l.inferred_count, l.propagated_count), (3, 1, 1));
        assert_eq!(l.resolutions(), 5);
    }

    #[test]
    fn one_executed_plus_four_inferred() {
        let mut l = CostLedger::default();
        l.record_executed(&stmt(&[2, 3], Provenance::Executed), Phase::Grow, None, None);
        for _ in 0..4 {
            l.record_free(&stmt(&[2], Provenance::InferredStrongUnion), Phase::Shrink);
        }
        assert_eq!(l.weighted_cost, 4);
        assert_eq!(l.inferred_count, 4);
    }

    #[test]
    fn trace_lines_are_json() {
        let mut l = CostLedger::default();
        l.record_executed(&stmt(&[5], Provenance::Executed), Phase::Init, Some(0.5), Some(true));
        let mut buf = Vec::new();
        l.write_trace(&mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert_eq!(
            line.trim(),
            r#"{"x":0,"y":1,"cond":[5],"independent":true,"provenance":"executed","weight":3,"phase":"init","p_value":0.5,"reliable":true}"#
        );
    }
}
