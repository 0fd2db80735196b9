//! Pearson chi-square test of conditional independence.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::contingency::ContingencyTable;
use crate::data::Dataset;
use crate::error::{input, Result};
use crate::varset::VarSet;

/// Result of one statistical test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    /// Natural log of the p-value, accurate even where `p_value` underflows.
    pub ln_p_value: f64,
    pub independent: bool,
    /// False when more than 20% of expected cell counts fall below 5, or
    /// when the table has no degrees of freedom at all.
    pub reliable: bool,
    pub weight: u64,
}

/// Statistic, degrees of freedom and Cochran counts of a table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: u64,
    pub cells: u64,
    pub sparse_cells: u64,
}

impl ChiSquare {
    /// Sums Pearson's statistic over the slices. Rows and columns with a
    /// zero marginal inside a slice are dropped from that slice, both from
    /// the statistic and from its `(r - 1)(c - 1)` degrees of freedom.
    pub fn from_table(t: &ContingencyTable) -> Self {
        let (rx, ry) = (t.x_arity, t.y_arity);
        let mut out = ChiSquare {
            statistic: 0.0,
            df: 0,
            cells: 0,
            sparse_cells: 0,
        };
        let mut row_sum = vec![0u64; rx];
        let mut col_sum = vec![0u64; ry];
        for s in &t.slices {
            row_sum.iter_mut().for_each(|v| *v = 0);
            col_sum.iter_mut().for_each(|v| *v = 0);
            for (row, counts) in row_sum.iter_mut().zip(s.counts.chunks_exact(ry)) {
                for (col, &c) in col_sum.iter_mut().zip(counts) {
                    *row += c;
                    *col += c;
                }
            }
            let total: u64 = row_sum.iter().sum();
            let r = row_sum.iter().filter(|&&v| v > 0).count() as u64;
            let c = col_sum.iter().filter(|&&v| v > 0).count() as u64;
            if r < 2 || c < 2 {
                continue;
            }
            out.df += (r - 1) * (c - 1);
            out.cells += r * c;
            let total = total as f64;
            for i in (0..rx).filter(|&i| row_sum[i] > 0) {
                for j in (0..ry).filter(|&j| col_sum[j] > 0) {
                    let expected = row_sum[i] as f64 * col_sum[j] as f64 / total;
                    let diff = s.counts[i * ry + j] as f64 - expected;
                    out.statistic += diff * diff / expected;
                    if expected < 5.0 {
                        out.sparse_cells += 1;
                    }
                }
            }
        }
        out
    }
}

/// Runs the test of `(x ⊥ y | z)` on `d` at level `alpha`.
pub fn chi_square_test(d: &Dataset, x: usize, y: usize, z: &VarSet, alpha: f64) -> Result<TestOutcome> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return input(format!("significance level {alpha} outside (0, 1)"));
    }
    let table = ContingencyTable::build(d, x, y, z)?;
    Ok(outcome_from_table(&table, z.len(), alpha))
}

pub(crate) fn outcome_from_table(table: &ContingencyTable, cond_len: usize, alpha: f64) -> TestOutcome {
    let weight = 2 + cond_len as u64;
    let chi = ChiSquare::from_table(table);
    if chi.df == 0 {
        return TestOutcome {
            statistic: 0.0,
            df: 0,
            p_value: 1.0,
            ln_p_value: 0.0,
            independent: true,
            reliable: false,
            weight,
        };
    }
    let ln_p = ln_chi_square_sf(chi.statistic, chi.df as f64);
    let p = ln_p.exp();
    TestOutcome {
        statistic: chi.statistic,
        df: chi.df,
        p_value: p,
        ln_p_value: ln_p,
        independent: p > alpha,
        // unreliable iff sparse / cells > 20%
        reliable: chi.sparse_cells * 5 <= chi.cells,
        weight,
    }
}

/// `ln P(χ²_df ≥ x)`.
pub fn ln_chi_square_sf(x: f64, df: f64) -> f64 {
    ln_gamma_q(df / 2.0, x / 2.0)
}

/// Upper tail p-value of the chi-square distribution.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    ln_chi_square_sf(x, df).exp()
}

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// Log of the regularized upper incomplete gamma function `Q(a, x)`.
///
/// Series for `P` below `x < a + 1`, Lentz continued fraction for `Q`
/// above it; the latter stays in log space so tiny tails keep their
/// precision.
pub fn ln_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    let ln_prefix = -x + a * x.ln() - ln_gamma(a);
    if x < a + 1.0 {
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let p = (ln_prefix + sum.ln()).exp();
        (-p).ln_1p()
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        ln_prefix + h.ln()
    }
}
