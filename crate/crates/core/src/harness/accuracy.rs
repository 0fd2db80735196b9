use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::citest::chi_square_test;
use crate::data::Dataset;
use crate::error::{input, Result};
use crate::graph::UndirectedGraph;
use crate::varset::VarSet;

/// A query `(x, y | cond)` with `|cond| = m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletSample {
    pub x: usize,
    pub y: usize,
    pub cond: VarSet,
    pub m: usize,
}

/// `floor(count / (n - 1))` triplets for each conditioning size
/// `m = 0..=n-2`. Each draws a random permutation of the variables: the
/// first two are the pair, the next `m` the conditioning set.
pub fn sample_triplets(n: usize, count: usize, seed: u64) -> Result<Vec<TripletSample>> {
    if n < 2 {
        return input(format!("triplets need at least 2 variables, got {n}"));
    }
    if count < n - 1 {
        return input(format!("{count} triplets cannot cover {} conditioning sizes", n - 1));
    }
    let per = count / (n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(per * (n - 1));
    for m in 0..n - 1 {
        for _ in 0..per {
            perm.shuffle(&mut rng);
            out.push(TripletSample {
                x: perm[0],
                y: perm[1],
                cond: perm[2..2 + m].iter().copied().collect(),
                m,
            });
        }
    }
    Ok(out)
}

/// Fraction of agreements between two sequences of decisions.
pub fn agreement(a: &[bool], b: &[bool]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return input("agreement needs two nonempty sequences of equal length");
    }
    let same = a.iter().zip(b).filter(|(p, q)| p == q).count();
    Ok(same as f64 / a.len() as f64)
}

/// Share of triplets on which separation in `g` agrees with the data's
/// chi-square decision at `alpha`.
pub fn estimate_accuracy(g: &UndirectedGraph, data: &Dataset, triplets: &[TripletSample], alpha: f64) -> Result<f64> {
    if g.n() != data.n_vars() {
        return input(format!("graph has {} vertices, data {} columns", g.n(), data.n_vars()));
    }
    let network = triplets
        .iter()
        .map(|t| g.vertex_separated(t.x, t.y, &t.cond))
        .collect::<Result<Vec<bool>>>()?;
    let observed = triplets
        .par_iter()
        .map(|t| Ok(chi_square_test(data, t.x, t.y, &t.cond, alpha)?.independent))
        .collect::<Result<Vec<bool>>>()?;
    agreement(&network, &observed)
}
