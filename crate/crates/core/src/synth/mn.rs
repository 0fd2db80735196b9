use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{input, parse_err, Error, Result};
use crate::graph::{strip_comment, UndirectedGraph};

/// Binary pairwise Markov network with the same coupling on every edge.
///
/// Each edge factor is `exp(θ/4)` on agreeing states and `exp(-θ/4)` on
/// disagreeing ones, so its log cross-product ratio is exactly θ.
#[derive(Clone, Debug, PartialEq)]
pub struct MNModel {
    pub graph: UndirectedGraph,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GibbsConfig {
    /// Sweeps discarded before the first kept row.
    pub burn_in: usize,
    /// Sweeps between kept rows.
    pub thinning: usize,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        Self {
            burn_in: 1000,
            thinning: 10,
        }
    }
}

pub fn build_mn(graph: UndirectedGraph, theta: f64) -> Result<MNModel> {
    if !theta.is_finite() {
        return input(format!("log-odds {theta} is not finite"));
    }
    Ok(MNModel { graph, theta })
}

impl MNModel {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Edge factor value for states `a` and `b`.
    pub fn potential(&self, a: u8, b: u8) -> f64 {
        self.log_potential(a, b).exp()
    }

    pub fn log_potential(&self, a: u8, b: u8) -> f64 {
        if a == b {
            self.theta / 4.0
        } else {
            -self.theta / 4.0
        }
    }

    /// Normalized joint over all `2^n` states; bit `i` of the index is
    /// variable `i`.
    pub fn exact_joint(&self) -> Result<Vec<f64>> {
        let n = self.n();
        if n > 20 {
            return Err(Error::Resource(format!("exact joint over {n} variables")));
        }
        let edges = self.graph.edges();
        let mut w: Vec<f64> = (0..1usize << n)
            .map(|s| {
                edges
                    .iter()
                    .map(|&(u, v)| self.log_potential((s >> u & 1) as u8, (s >> v & 1) as u8))
                    .sum::<f64>()
                    .exp()
            })
            .collect();
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|p| *p /= z);
        Ok(w)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "theta {}", self.theta).unwrap();
        s.push_str(&self.graph.to_text());
        s
    }

    /// `theta <value>` line followed by the graph format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut theta = None;
        let mut rest = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if theta.is_none() && !line.is_empty() {
                let v = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                    ["theta", v] => v
                        .parse::<f64>()
                        .map_err(|_| parse_err(i + 1, format!("bad theta {v:?}")))?,
                    _ => return Err(parse_err(i + 1, "expected header `theta <value>`")),
                };
                theta = Some(v);
                rest.push('\n');
            } else {
                rest.push_str(raw);
                rest.push('\n');
            }
        }
        let theta = theta.ok_or_else(|| parse_err(0, "missing header `theta <value>`"))?;
        build_mn(UndirectedGraph::parse(&rest)?, theta)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Single-site Gibbs sampler sweeping variables in index order from a
/// uniformly random start.
pub fn gibbs_sample(model: &MNModel, rows: usize, config: GibbsConfig, seed: u64) -> Result<Dataset> {
    if rows == 0 {
        return input("at least one row must be sampled");
    }
    if config.thinning == 0 {
        return input("thinning must be at least one sweep");
    }
    let n = model.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| model.graph.neighbors(v).to_vec()).collect();
    let mut state: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    // log P(v = 1) / P(v = 0) moves by ±θ/2 per neighbor
    let half = model.theta / 2.0;
    let sweep = |state: &mut [u8], rng: &mut ChaCha8Rng| {
        for v in 0..n {
            let logit: f64 = neighbors[v]
                .iter()
                .map(|&u| if state[u] == 1 { half } else { -half })
                .sum();
            let p1 = 1.0 / (1.0 + (-logit).exp());
            state[v] = u8::from(rng.gen::<f64>() < p1);
        }
    };
    for _ in 0..config.burn_in {
        sweep(&mut state, &mut rng);
    }
    let mut columns = vec![Vec::with_capacity(rows); n];
    for _ in 0..rows {
        for _ in 0..config.thinning {
            sweep(&mut state, &mut rng);
        }
        for (c, &s) in columns.iter_mut().zip(&state) {
            c.push(u16::from(s));
        }
    }
    Dataset::from_columns(vec![2; n], columns)
}
