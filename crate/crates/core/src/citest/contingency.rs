use std::collections::HashMap;

use crate::data::Dataset;
use crate::error::{input, Result};
use crate::varset::VarSet;

/// Counts of `(x, y)` for one configuration of the conditioning variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    /// Codes of the conditioning variables, in ascending variable order.
    pub config: Vec<u16>,
    /// Row-major `x_arity * y_arity` counts.
    pub counts: Vec<u64>,
}

/// Sparse three-way table: only conditioning configurations that occur in
/// the data get a slice.
#[derive(Clone, Debug)]
pub struct ContingencyTable {
    pub x_arity: usize,
    pub y_arity: usize,
    pub slices: Vec<Slice>,
    /// Data rows examined while building the table.
    pub rows_scanned: usize,
    /// Cells read while building the table.
    pub cells_read: usize,
}

impl ContingencyTable {
    /// One pass over the data, reading the `2 + |z|` relevant columns of
    /// each row once.
    pub fn build(d: &Dataset, x: usize, y: usize, z: &VarSet) -> Result<Self> {
        let n = d.n_vars();
        if x >= n || y >= n || z.upper_bound() > n {
            return input(format!("variables out of range for a data set of {n} columns"));
        }
        if x == y || z.contains(x) || z.contains(y) {
            return input(format!("ill-formed triplet ({x}, {y} | {z})"));
        }
        let (rx, ry) = (d.arity(x), d.arity(y));
        let zvars: Vec<usize> = z.iter().collect();
        let xs = d.column(x);
        let ys = d.column(y);
        let zcols: Vec<&[u16]> = zvars.iter().map(|&v| d.column(v)).collect();

        // Mixed-radix keys when the configuration space fits in a u64,
        // otherwise hash the code vector itself.
        let radix_fits = zvars
            .iter()
            .try_fold(1u64, |acc, &v| acc.checked_mul(d.arity(v) as u64))
            .is_some();

        let mut slices: Vec<Slice> = Vec::new();
        let mut by_key: HashMap<u64, usize> = HashMap::new();
        let mut by_vec: HashMap<Vec<u16>, usize> = HashMap::new();
        let mut config = Vec::with_capacity(zvars.len());
        let rows = d.n_rows();
        let mut cells_read = 0usize;
        for r in 0..rows {
            config.clear();
            let mut key = 0u64;
            for (col, &v) in zcols.iter().zip(&zvars) {
                let c = col[r];
                config.push(c);
                if radix_fits {
                    key = key * d.arity(v) as u64 + c as u64;
                }
            }
            let slot = if radix_fits {
                *by_key.entry(key).or_insert_with(|| {
                    slices.push(Slice {
                        config: config.clone(),
                        counts: vec![0; rx * ry],
                    });
                    slices.len() - 1
                })
            } else {
                match by_vec.get(&config) {
                    Some(&s) => s,
                    None => {
                        slices.push(Slice {
                            config: config.clone(),
                            counts: vec![0; rx * ry],
                        });
                        by_vec.insert(config.clone(), slices.len() - 1);
                        slices.len() - 1
                    }
                }
            };
            slices[slot].counts[xs[r] as usize * ry + ys[r] as usize] += 1;
            cells_read += 2 + zcols.len();
        }
        Ok(Self {
            x_arity: rx,
            y_arity: ry,
            slices,
            rows_scanned: rows,
            cells_read,
        })
    }

    /// Count of `(x = xv, y = yv, z = config)`; zero for absent slices.
    pub fn get(&self, xv: usize, yv: usize, config: &[u16]) -> u64 {
        self.slices
            .iter()
            .find(|s| s.config == config)
            .map_or(0, |s| s.counts[xv * self.y_arity + yv])
    }

    pub fn total(&self) -> u64 {
        self.slices.iter().flat_map(|s| s.counts.iter()).sum()
    }
}
