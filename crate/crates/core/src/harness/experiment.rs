//! Batch experiments: generate or load inputs, run learners, emit metrics.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::accuracy::{estimate_accuracy, sample_triplets};
use super::discretize::load_csv;
use crate::citest::{IndependenceEngine, DEFAULT_ALPHA};
use crate::data::Dataset;
use crate::error::{input, Error, Result};
use crate::graph::UndirectedGraph;
use crate::kb::ClosureConfig;
use crate::learners::{run_gsimn, run_gsimn_fch, run_gsmn_star, Algorithm, RunResult};
use crate::synth::{build_mn, gibbs_sample, logic_sample, moralize, random_structure, BNModel, GibbsConfig};

/// Where a repetition's independence answers come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Separation in a random graph.
    Oracle,
    /// Gibbs samples from a random pairwise network.
    Sampled,
    /// Logic samples from a Bayesian network file; truth is its moral graph.
    Bn,
    /// A data file, subsampled per repetition; no ground truth.
    Dataset,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_reps() -> usize {
    1
}
fn default_n() -> OneOrMany<usize> {
    OneOrMany::One(0)
}
fn default_tau() -> OneOrMany<f64> {
    OneOrMany::One(0.0)
}
fn default_fraction() -> f64 {
    1.0
}
fn default_max_statements() -> usize {
    ClosureConfig::default().max_statements
}
fn default_burn_in() -> usize {
    GibbsConfig::default().burn_in
}
fn default_thinning() -> usize {
    GibbsConfig::default().thinning
}
fn default_fch_max_n() -> usize {
    crate::kb::MAX_CLOSURE_VARS
}

/// Experiment description, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub kind: ExperimentKind,
    pub algorithms: Vec<Algorithm>,
    /// Numerator/denominator pairs for ratio records. Defaults to the first
    /// algorithm over each of the others.
    #[serde(default)]
    pub ratios: Vec<(Algorithm, Algorithm)>,
    #[serde(default = "default_n")]
    pub n: OneOrMany<usize>,
    #[serde(default = "default_tau")]
    pub tau: OneOrMany<f64>,
    #[serde(default)]
    pub theta: f64,
    /// Rows sampled per repetition (sampled and bn kinds).
    #[serde(default)]
    pub rows: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub repetitions: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_burn_in")]
    pub gibbs_burn_in: usize,
    #[serde(default = "default_thinning")]
    pub gibbs_thinning: usize,
    #[serde(default = "default_max_statements")]
    pub fch_max_statements: usize,
    #[serde(default)]
    pub fch_max_endpoint: Option<usize>,
    /// GSIMN-FCH is skipped (recorded as not run) above this many variables.
    #[serde(default = "default_fch_max_n")]
    pub fch_max_n: usize,
    /// Triplets for the accuracy estimate on data kinds; 0 disables it.
    #[serde(default)]
    pub accuracy_triplets: usize,
    #[serde(default)]
    pub bn: Option<PathBuf>,
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub numeric_columns: Vec<String>,
    /// Share of dataset rows each repetition learns from, drawn without
    /// replacement.
    #[serde(default = "default_fraction")]
    pub subsample_fraction: f64,
    /// Adds wall-clock milliseconds to run records, which makes output
    /// files machine-dependent.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config; relative file paths resolve against its directory.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::parse(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.bn, &mut cfg.dataset, &mut cfg.output].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return input(format!("alpha {} outside (0, 1)", self.alpha));
        }
        if self.algorithms.is_empty() {
            return input("no algorithms selected");
        }
        if self.repetitions == 0 {
            return input("repetitions must be positive");
        }
        for (a, b) in &self.ratios {
            if !self.algorithms.contains(a) || !self.algorithms.contains(b) {
                return input(format!("ratio {a}/{b} names an algorithm that is not run"));
            }
        }
        let need_rows = matches!(self.kind, ExperimentKind::Sampled | ExperimentKind::Bn);
        if need_rows && self.rows == 0 {
            return input("rows must be positive for sampled data");
        }
        match self.kind {
            ExperimentKind::Oracle | ExperimentKind::Sampled => {
                if self.n.to_vec().is_empty() || self.tau.to_vec().is_empty() {
                    return input("n and tau need at least one value");
                }
            }
            ExperimentKind::Bn => match &self.bn {
                Some(p) if p.is_relative() || p.exists() => {}
                Some(p) => return input(format!("network file {} not found", p.display())),
                None => return input("bn experiments need a `bn` file"),
            },
            ExperimentKind::Dataset => {
                match &self.dataset {
                    Some(p) if p.is_relative() || p.exists() => {}
                    Some(p) => return input(format!("data file {} not found", p.display())),
                    None => return input("dataset experiments need a `dataset` file"),
                }
                if !(self.subsample_fraction > 0.0 && self.subsample_fraction <= 1.0) {
                    return input("subsample_fraction must lie in (0, 1]");
                }
            }
        }
        Ok(())
    }

    /// Hex SHA-256 prefix of the config's canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(&Sha256::digest(&json)[..8])
    }

    fn ratio_pairs(&self) -> Vec<(Algorithm, Algorithm)> {
        if !self.ratios.is_empty() {
            return self.ratios.clone();
        }
        let first = self.algorithms[0];
        self.algorithms[1..].iter().map(|&b| (first, b)).collect()
    }

    fn closure(&self) -> ClosureConfig {
        ClosureConfig {
            max_statements: self.fch_max_statements,
            max_endpoint_size: self.fch_max_endpoint,
        }
    }
}

/// Outcome of one algorithm on one repetition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub config_hash: String,
    pub repetition: usize,
    pub seed: u64,
    pub n: usize,
    pub tau: Option<f64>,
    pub algorithm: Algorithm,
    pub completed: bool,
    pub error: Option<String>,
    pub executed_tests: u64,
    pub weighted_cost: u64,
    pub inferred: u64,
    pub propagated: u64,
    pub unreliable: u64,
    pub edges: usize,
    pub hamming: Option<usize>,
    pub normalized_hamming: Option<f64>,
    pub accuracy: Option<f64>,
    pub kb_size: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

/// Quotients between two algorithms on the same repetition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub experiment: String,
    pub config_hash: String,
    pub repetition: usize,
    pub seed: u64,
    pub n: usize,
    pub tau: Option<f64>,
    pub numerator: Algorithm,
    pub denominator: Algorithm,
    pub weighted_cost_ratio: Option<f64>,
    pub executed_ratio: Option<f64>,
}

/// Means over the completed runs of one algorithm in one (n, τ) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub n: usize,
    pub tau: Option<f64>,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub completed: usize,
    pub mean_executed_tests: Option<f64>,
    pub mean_weighted_cost: Option<f64>,
    pub mean_normalized_hamming: Option<f64>,
    pub mean_accuracy: Option<f64>,
}

/// Mean ratio between two algorithms over one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioAggregateRecord {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub n: usize,
    pub tau: Option<f64>,
    pub numerator: Algorithm,
    pub denominator: Algorithm,
    pub pairs: usize,
    pub mean_weighted_cost_ratio: Option<f64>,
    pub mean_executed_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Run(RunRecord),
    Ratio(RatioRecord),
    Aggregate(AggregateRecord),
    RatioAggregate(RatioAggregateRecord),
}

/// Ground truth and engine source for one repetition.
struct Instance {
    n: usize,
    truth: Option<UndirectedGraph>,
    data: Option<Arc<Dataset>>,
    accuracy_data: Option<Arc<Dataset>>,
}

/// Seed for an independent stream derived from a repetition's seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const DATA_STREAM: u64 = 1;
const TRIPLET_STREAM: u64 = 2;
const SUBSAMPLE_STREAM: u64 = 3;

fn ratio(a: u64, b: u64) -> Option<f64> {
    (b != 0).then(|| a as f64 / b as f64)
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, k) = v.fold((0.0, 0usize), |(s, k), x| (s + x, k + 1));
    (k > 0).then(|| s / k as f64)
}

struct Cell {
    n: usize,
    tau: Option<f64>,
    rep: usize,
    seed: u64,
}

fn build_instance(cfg: &ExperimentConfig, cell: &Cell, shared: Option<&Arc<Dataset>>) -> Result<Instance> {
    let data_seed = derive_seed(cell.seed, DATA_STREAM);
    match cfg.kind {
        ExperimentKind::Oracle => Ok(Instance {
            n: cell.n,
            truth: Some(random_structure(cell.n, cell.tau.unwrap_or(0.0), cell.seed)?),
            data: None,
            accuracy_data: None,
        }),
        ExperimentKind::Sampled => {
            let g = random_structure(cell.n, cell.tau.unwrap_or(0.0), cell.seed)?;
            let model = build_mn(g.clone(), cfg.theta)?;
            let gibbs = GibbsConfig {
                burn_in: cfg.gibbs_burn_in,
                thinning: cfg.gibbs_thinning,
            };
            let data = Arc::new(gibbs_sample(&model, cfg.rows, gibbs, data_seed)?);
            Ok(Instance {
                n: cell.n,
                truth: Some(g),
                data: Some(data.clone()),
                accuracy_data: Some(data),
            })
        }
        ExperimentKind::Bn => {
            let model = BNModel::read(cfg.bn.as_ref().expect("validated"))?;
            let data = Arc::new(logic_sample(&model, cfg.rows, data_seed)?);
            Ok(Instance {
                n: model.n(),
                truth: Some(moralize(&model)?),
                data: Some(data.clone()),
                accuracy_data: Some(data),
            })
        }
        ExperimentKind::Dataset => {
            let full = shared.expect("dataset loaded").clone();
            let rows = full.n_rows();
            let keep = ((rows as f64 * cfg.subsample_fraction).round() as usize).clamp(1, rows);
            let data = if keep == rows {
                full.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cell.seed, SUBSAMPLE_STREAM));
                let mut idx = sample(&mut rng, rows, keep).into_vec();
                idx.sort_unstable();
                Arc::new(full.select_rows(&idx)?)
            };
            Ok(Instance {
                n: full.n_vars(),
                truth: None,
                data: Some(data),
                accuracy_data: Some(full),
            })
        }
    }
}

fn run_one(cfg: &ExperimentConfig, inst: &Instance, algorithm: Algorithm) -> Result<RunResult> {
    let engine = match (&inst.truth, &inst.data) {
        (_, Some(d)) => IndependenceEngine::data(d.clone(), cfg.alpha)?,
        (Some(g), None) => IndependenceEngine::oracle(g.clone()),
        (None, None) => unreachable!("instances carry a truth or data"),
    }
    .without_trace();
    match algorithm {
        Algorithm::GsmnStar => run_gsmn_star(engine, true),
        Algorithm::GsmnStarNoprop => run_gsmn_star(engine, false),
        Algorithm::Gsimn => run_gsimn(engine),
        Algorithm::GsimnFch => {
            if inst.n > cfg.fch_max_n {
                return Err(Error::Resource(format!(
                    "{} variables exceed the configured forward-chaining limit {}",
                    inst.n, cfg.fch_max_n
                )));
            }
            run_gsimn_fch(engine, cfg.closure())
        }
    }
}

fn repetition_records(cfg: &ExperimentConfig, hash: &str, cell: &Cell, shared: Option<&Arc<Dataset>>) -> Vec<Record> {
    let base = |algorithm| RunRecord {
        experiment: cfg.name.clone(),
        config_hash: hash.to_string(),
        repetition: cell.rep,
        seed: cell.seed,
        n: cell.n,
        tau: cell.tau,
        algorithm,
        completed: false,
        error: None,
        executed_tests: 0,
        weighted_cost: 0,
        inferred: 0,
        propagated: 0,
        unreliable: 0,
        edges: 0,
        hamming: None,
        normalized_hamming: None,
        accuracy: None,
        kb_size: 0,
        elapsed_ms: None,
    };
    let inst = match build_instance(cfg, cell, shared) {
        Ok(i) => i,
        Err(e) => {
            return cfg
                .algorithms
                .iter()
                .map(|&a| {
                    Record::Run(RunRecord {
                        error: Some(e.to_string()),
                        ..base(a)
                    })
                })
                .collect()
        }
    };
    let triplets = match (&inst.accuracy_data, cfg.accuracy_triplets) {
        (Some(_), k) if k > 0 && inst.n >= 2 => {
            sample_triplets(inst.n, k.max(inst.n - 1), derive_seed(cell.seed, TRIPLET_STREAM)).ok()
        }
        _ => None,
    };
    let mut runs = Vec::new();
    for &algorithm in &cfg.algorithms {
        let start = Instant::now();
        let mut rec = RunRecord { n: inst.n, ..base(algorithm) };
        match run_one(cfg, &inst, algorithm) {
            Ok(r) => {
                rec.completed = r.completed();
                rec.error = r.aborted.clone();
                rec.executed_tests = r.ledger.executed_count;
                rec.weighted_cost = r.ledger.weighted_cost;
                rec.inferred = r.ledger.inferred_count;
                rec.propagated = r.ledger.propagated_count;
                rec.unreliable = r.ledger.unreliable_count;
                rec.edges = r.graph.edge_count();
                rec.kb_size = r.kb_size;
                if let Some(t) = &inst.truth {
                    rec.hamming = r.graph.hamming_distance(t).ok();
                    rec.normalized_hamming = r.graph.normalized_hamming(t).ok();
                }
                if let (Some(d), Some(t)) = (&inst.accuracy_data, &triplets) {
                    rec.accuracy = estimate_accuracy(&r.graph, d, t, cfg.alpha).ok();
                }
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        if cfg.record_timing {
            rec.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        runs.push(rec);
    }
    let mut out: Vec<Record> = Vec::new();
    for (a, b) in cfg.ratio_pairs() {
        let find = |alg| runs.iter().find(|r| r.algorithm == alg && r.completed);
        if let (Some(ra), Some(rb)) = (find(a), find(b)) {
            out.push(Record::Ratio(RatioRecord {
                experiment: cfg.name.clone(),
                config_hash: hash.to_string(),
                repetition: cell.rep,
                seed: cell.seed,
                n: inst.n,
                tau: cell.tau,
                numerator: a,
                denominator: b,
                weighted_cost_ratio: ratio(ra.weighted_cost, rb.weighted_cost),
                executed_ratio: ratio(ra.executed_tests, rb.executed_tests),
            }));
        }
    }
    runs.into_iter().map(Record::Run).chain(out).collect()
}

fn aggregates(cfg: &ExperimentConfig, hash: &str, records: &[Record]) -> Vec<Record> {
    let mut cells: Vec<(usize, Option<f64>)> = Vec::new();
    for r in records {
        if let Record::Run(r) = r {
            if !cells.contains(&(r.n, r.tau)) {
                cells.push((r.n, r.tau));
            }
        }
    }
    let mut out = Vec::new();
    for &(n, tau) in &cells {
        for &algorithm in &cfg.algorithms {
            let runs: Vec<&RunRecord> = records
                .iter()
                .filter_map(|r| match r {
                    Record::Run(r) if r.n == n && r.tau == tau && r.algorithm == algorithm => Some(r),
                    _ => None,
                })
                .collect();
            let done: Vec<&&RunRecord> = runs.iter().filter(|r| r.completed).collect();
            out.push(Record::Aggregate(AggregateRecord {
                experiment: cfg.name.clone(),
                config_hash: hash.to_string(),
                seed: cfg.seed,
                n,
                tau,
                algorithm,
                runs: runs.len(),
                completed: done.len(),
                mean_executed_tests: mean(done.iter().map(|r| r.executed_tests as f64)),
                mean_weighted_cost: mean(done.iter().map(|r| r.weighted_cost as f64)),
                mean_normalized_hamming: mean(done.iter().filter_map(|r| r.normalized_hamming)),
                mean_accuracy: mean(done.iter().filter_map(|r| r.accuracy)),
            }));
        }
        for (a, b) in cfg.ratio_pairs() {
            let rs: Vec<&RatioRecord> = records
                .iter()
                .filter_map(|r| match r {
                    Record::Ratio(r) if r.n == n && r.tau == tau && r.numerator == a && r.denominator == b => Some(r),
                    _ => None,
                })
                .collect();
            out.push(Record::RatioAggregate(RatioAggregateRecord {
                experiment: cfg.name.clone(),
                config_hash: hash.to_string(),
                seed: cfg.seed,
                n,
                tau,
                numerator: a,
                denominator: b,
                pairs: rs.len(),
                mean_weighted_cost_ratio: mean(rs.iter().filter_map(|r| r.weighted_cost_ratio)),
                mean_executed_ratio: mean(rs.iter().filter_map(|r| r.executed_ratio)),
            }));
        }
    }
    out
}

/// Runs every repetition (in parallel) and returns per-run, ratio and
/// aggregate records in a deterministic order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    let hash = cfg.hash();
    let shared = match cfg.kind {
        ExperimentKind::Dataset => Some(Arc::new(load_csv(
            cfg.dataset.as_ref().expect("validated"),
            &cfg.numeric_columns,
        )?)),
        _ => None,
    };
    let grid: Vec<(usize, Option<f64>)> = match cfg.kind {
        ExperimentKind::Oracle | ExperimentKind::Sampled => cfg
            .n
            .to_vec()
            .into_iter()
            .flat_map(|n| cfg.tau.to_vec().into_iter().map(move |t| (n, Some(t))))
            .collect(),
        _ => vec![(0, None)],
    };
    let cells: Vec<Cell> = grid
        .iter()
        .flat_map(|&(n, tau)| {
            (0..cfg.repetitions).map(move |rep| Cell {
                n,
                tau,
                rep,
                seed: cfg.seed + rep as u64,
            })
        })
        .collect();
    let per_cell: Vec<Vec<Record>> = cells
        .par_iter()
        .map(|c| repetition_records(cfg, &hash, c, shared.as_ref()))
        .collect();
    let mut records: Vec<Record> = per_cell.into_iter().flatten().collect();
    let agg = aggregates(cfg, &hash, &records);
    records.extend(agg);
    Ok(records)
}

/// One JSON object per line.
pub fn write_records<W: Write>(records: &[Record], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
