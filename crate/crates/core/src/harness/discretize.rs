use std::path::Path;

use crate::data::{read_raw_csv, Dataset};
use crate::error::{input, Result};

/// Number of equal-width bins for `rows` values: `floor(1 + log2 rows)`.
pub fn bin_count(rows: usize) -> usize {
    if rows == 0 {
        return 0;
    }
    1 + rows.ilog2() as usize
}

/// Equal-width bins over the observed range, closed on the right: a value
/// lands in the bin given by how many inner boundaries lie strictly below
/// it, so the maximum falls in the top bin. A constant column maps to 0.
pub fn discretize(values: &[f64]) -> Result<Vec<u16>> {
    if values.is_empty() {
        return input("cannot discretize an empty column");
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return input(format!("non-finite value {v} in a numeric column"));
    }
    let k = bin_count(values.len());
    if k > u16::MAX as usize {
        return input("too many bins");
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo == hi {
        return Ok(vec![0; values.len()]);
    }
    let bounds: Vec<f64> = (1..k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect();
    Ok(values
        .iter()
        .map(|&v| bounds.partition_point(|&b| b < v) as u16)
        .collect())
}

/// Parses and discretizes a column of numeric text.
pub fn discretize_text(values: &[String]) -> Result<(Vec<u16>, usize)> {
    let parsed = values
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .or_else(|_| input(format!("non-numeric value {s:?} in a numeric column")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let codes = discretize(&parsed)?;
    Ok((codes, bin_count(values.len()).max(2)))
}

/// Reads a CSV file; the named columns are numeric and get binned, all
/// others are categorical.
pub fn load_csv(path: impl AsRef<Path>, numeric: &[String]) -> Result<Dataset> {
    let (names, raw) = read_raw_csv(std::fs::File::open(path)?)?;
    for name in numeric {
        if !names.contains(name) {
            return input(format!("numeric column {name:?} not in the header"));
        }
    }
    let mut d = Dataset::from_labels(names.clone(), &raw)?;
    for (j, name) in names.iter().enumerate() {
        if numeric.contains(name) {
            let (codes, arity) = discretize_text(&raw[j])?;
            let labels = (0..arity).map(|b| format!("bin{b}")).collect();
            d.replace_column(j, codes, arity, labels)?;
        }
    }
    Ok(d)
}
