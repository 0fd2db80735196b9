use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use gsimn_core::citest::{IndependenceEngine, DEFAULT_ALPHA};
use gsimn_core::graph::UndirectedGraph;
use gsimn_core::harness::{
    estimate_accuracy, load_csv, run_experiment, sample_triplets, write_records, ExperimentConfig,
};
use gsimn_core::kb::ClosureConfig;
use gsimn_core::learners::{run_algorithm, run_gsimn_fch, Algorithm, RunResult};
use gsimn_core::synth::{
    build_mn, gibbs_sample, logic_sample, moralize, random_structure, BNModel, GibbsConfig, MNModel,
};

#[derive(Parser)]
#[command(name = "gsimn", version, about = "Markov network structure learning from independence tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random undirected graph with average degree tau.
    GenNet {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Attach binary potentials with edge log-odds theta to a graph.
    BuildMn {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample rows from a Markov network (Gibbs) or Bayesian network
    /// (logic sampling).
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = GibbsConfig::default().burn_in)]
        burn_in: usize,
        #[arg(long, default_value_t = GibbsConfig::default().thinning)]
        thinning: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Moral graph of a Bayesian network.
    Moralize {
        #[arg(long)]
        bn: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn a structure and write it as a graph file.
    Learn(LearnArgs),
    /// Agreement between a graph and tests on data over random triplets.
    Accuracy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        triplets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Columns to bin as numeric.
        #[arg(long = "numeric")]
        numeric: Vec<String>,
    },
    /// Run an experiment config and print one JSON record per line.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Write records here instead of stdout; overrides the config's
        /// `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long)]
    algo: Algorithm,
    /// Answer tests by vertex separation on this graph.
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    oracle: Option<PathBuf>,
    /// Answer tests by chi-square on this CSV file.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long = "numeric")]
    numeric: Vec<String>,
    /// Forward-chaining statement budget.
    #[arg(long)]
    max_statements: Option<usize>,
    /// Largest endpoint set the forward chainer materializes.
    #[arg(long)]
    max_endpoint_size: Option<usize>,
    /// Write the per-test trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> gsimn_core::Result<()> {
    match cli.command {
        Command::GenNet { n, tau, seed, out } => random_structure(n, tau, seed)?.write(out),
        Command::BuildMn { graph, theta, out } => build_mn(UndirectedGraph::read(graph)?, theta)?.write(out),
        Command::Sample {
            model,
            count,
            seed,
            burn_in,
            thinning,
            out,
        } => {
            let text = std::fs::read_to_string(&model)?;
            let data = if is_mn_text(&text) {
                let cfg = GibbsConfig { burn_in, thinning };
                gibbs_sample(&MNModel::parse(&text)?, count, cfg, seed)?
            } else {
                logic_sample(&BNModel::parse(&text)?, count, seed)?
            };
            data.write_csv(out)
        }
        Command::Moralize { bn, out } => moralize(&BNModel::read(bn)?)?.write(out),
        Command::Learn(args) => learn(args),
        Command::Accuracy {
            graph,
            data,
            triplets,
            seed,
            alpha,
            numeric,
        } => {
            let g = UndirectedGraph::read(graph)?;
            let d = load_csv(data, &numeric)?;
            let sample = sample_triplets(d.n_vars(), triplets, seed)?;
            let acc = estimate_accuracy(&g, &d, &sample, alpha)?;
            println!("{}", json!({ "accuracy": acc, "triplets": sample.len() }));
            Ok(())
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::read(config)?;
            let records = run_experiment(&cfg)?;
            match out.or(cfg.output) {
                Some(p) => write_records(&records, BufWriter::new(File::create(p)?)),
                None => write_records(&records, io::stdout().lock()),
            }
        }
    }
}

/// A Markov network file opens with its `theta` header.
fn is_mn_text(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("theta"))
}

fn learn(args: LearnArgs) -> gsimn_core::Result<()> {
    let engine = match (&args.oracle, &args.data) {
        (Some(g), _) => IndependenceEngine::oracle(UndirectedGraph::read(g)?),
        (None, Some(d)) => IndependenceEngine::data(Arc::new(load_csv(d, &args.numeric)?), args.alpha)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let engine = if args.trace.is_some() { engine } else { engine.without_trace() };
    let res = if args.algo == Algorithm::GsimnFch {
        let mut cfg = ClosureConfig::default();
        if let Some(m) = args.max_statements {
            cfg.max_statements = m;
        }
        cfg.max_endpoint_size = args.max_endpoint_size;
        run_gsimn_fch(engine, cfg)?
    } else {
        run_algorithm(args.algo, engine)?
    };
    res.graph.write(&args.out)?;
    if let Some(p) = &args.trace {
        res.ledger.write_trace(BufWriter::new(File::create(p)?))?;
    }
    print_summary(&res, &args.out)?;
    Ok(())
}

fn print_summary(res: &RunResult, out: &Path) -> gsimn_core::Result<()> {
    let l = &res.ledger;
    let summary = json!({
        "algorithm": res.algorithm,
        "completed": res.completed(),
        "aborted": res.aborted,
        "edges": res.graph.edge_count(),
        "executed_tests": l.executed_count,
        "weighted_cost": l.weighted_cost,
        "inferred": l.inferred_count,
        "propagated": l.propagated_count,
        "unreliable": l.unreliable_count,
        "kb_size": res.kb_size,
        "out": out.display().to_string(),
    });
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{summary}")?;
    Ok(())
}
