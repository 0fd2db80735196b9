use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Result};
use crate::graph::UndirectedGraph;

/// Graph on `n` vertices whose edges are the first `round(τn/2)` pairs of a
/// seeded uniform shuffle of all pairs, so the mean degree is τ.
pub fn random_structure(n: usize, tau: f64, seed: u64) -> Result<UndirectedGraph> {
    if !tau.is_finite() || tau < 0.0 {
        return input(format!("average degree {tau} must be a nonnegative number"));
    }
    let edges = (tau * n as f64 / 2.0).round() as usize;
    let pairs = n * n.saturating_sub(1) / 2;
    if edges > pairs {
        return input(format!("{edges} edges requested but only {pairs} pairs exist"));
    }
    let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    UndirectedGraph::from_edges(n, &all[..edges])
}
