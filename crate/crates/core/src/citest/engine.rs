use std::sync::Arc;

use super::chisq::{outcome_from_table, TestOutcome};
use super::contingency::ContingencyTable;
use super::ledger::{CostLedger, Phase};
use crate::data::Dataset;
use crate::error::{input, Result};
use crate::graph::UndirectedGraph;
use crate::statement::{CIStatement, Provenance};
use crate::varset::VarSet;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Log p-value reported by the oracle for a dependence. The oracle's
/// p-values are 0 or 1; this finite stand-in keeps average log p-values
/// comparable between variables.
pub const ORACLE_DEPENDENT_LN_P: f64 = -1000.0;

/// Where independence answers come from.
#[derive(Clone, Debug)]
pub enum Backend {
    /// Vertex separation on a known graph.
    Oracle(Arc<UndirectedGraph>),
    /// Pearson chi-square on discrete data at level `alpha`.
    Data { data: Arc<Dataset>, alpha: f64 },
}

/// Answers `(x ⊥ y | z)` queries and accounts for every resolution.
#[derive(Clone, Debug)]
pub struct IndependenceEngine {
    backend: Backend,
    ledger: CostLedger,
    phase: Phase,
    record_trace: bool,
}

impl IndependenceEngine {
    pub fn oracle(graph: impl Into<Arc<UndirectedGraph>>) -> Self {
        Self::with_backend(Backend::Oracle(graph.into()))
    }

    pub fn data(data: impl Into<Arc<Dataset>>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return input(format!("significance level {alpha} outside (0, 1)"));
        }
        Ok(Self::with_backend(Backend::Data {
            data: data.into(),
            alpha,
        }))
    }

    pub fn with_backend(backend: Backend) -> Self {
        Self {
            backend,
            ledger: CostLedger::default(),
            phase: Phase::Other,
            record_trace: true,
        }
    }

    /// Disables the per-query trace (counters are still maintained).
    pub fn without_trace(mut self) -> Self {
        self.record_trace = false;
        self
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn n_vars(&self) -> usize {
        match &self.backend {
            Backend::Oracle(g) => g.n(),
            Backend::Data { data, .. } => data.n_vars(),
        }
    }

    /// Significance level; the oracle's 0/1 p-values make any level in
    /// (0, 1) equivalent, so it reports the default.
    pub fn alpha(&self) -> f64 {
        match &self.backend {
            Backend::Oracle(_) => DEFAULT_ALPHA,
            Backend::Data { alpha, .. } => *alpha,
        }
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> CostLedger {
        self.ledger
    }

    /// Runs the test on the backend and records it with weight `2 + |z|`.
    pub fn execute(&mut self, x: usize, y: usize, z: &VarSet) -> Result<TestOutcome> {
        let out = match &self.backend {
            Backend::Oracle(g) => {
                let independent = g.vertex_separated(x, y, z)?;
                TestOutcome {
                    statistic: 0.0,
                    df: 0,
                    p_value: if independent { 1.0 } else { 0.0 },
                    ln_p_value: if independent { 0.0 } else { ORACLE_DEPENDENT_LN_P },
                    independent,
                    reliable: true,
                    weight: 2 + z.len() as u64,
                }
            }
            Backend::Data { data, alpha } => {
                let table = ContingencyTable::build(data, x, y, z)?;
                outcome_from_table(&table, z.len(), *alpha)
            }
        };
        let stmt = CIStatement::new(x, y, *z, out.independent, Provenance::Executed);
        let (p, rel) = match self.backend {
            Backend::Oracle(_) => (None, None),
            Backend::Data { .. } => (Some(out.p_value), Some(out.reliable)),
        };
        self.ledger.record_executed(&stmt, self.phase, p, rel);
        if !self.record_trace {
            self.ledger.trace.clear();
        }
        Ok(out)
    }

    /// Executed test, decision only.
    pub fn execute_test(&mut self, x: usize, y: usize, z: &VarSet) -> Result<bool> {
        Ok(self.execute(x, y, z)?.independent)
    }

    /// Accounts for a statement resolved without touching the backend.
    pub fn record_inferred(&mut self, s: &CIStatement) -> Result<()> {
        if s.provenance == Provenance::Executed {
            return input("record_inferred called with an executed statement");
        }
        self.ledger.record_free(s, self.phase);
        if !self.record_trace {
            self.ledger.trace.clear();
        }
        Ok(())
    }
}
