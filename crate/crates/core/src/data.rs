//! Discrete data sets.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::error::{input, Result};
use crate::varset::MAX_VARS;

/// Column-major table of categorical codes.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    arities: Vec<usize>,
    columns: Vec<Vec<u16>>,
    /// Original category labels per column, indexed by code. Empty when the
    /// data was generated rather than loaded.
    labels: Vec<Vec<String>>,
}

impl Dataset {
    /// Builds a data set from columns of codes; every code must be below its
    /// column's arity, every arity at least 2.
    pub fn new(names: Vec<String>, arities: Vec<usize>, columns: Vec<Vec<u16>>) -> Result<Self> {
        if names.len() != columns.len() || arities.len() != columns.len() {
            return input("names, arities and columns must have equal length");
        }
        if columns.len() > MAX_VARS {
            return input(format!("{} columns exceed the maximum {MAX_VARS}", columns.len()));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if rows == 0 {
            return input("a data set needs at least one row");
        }
        for (j, (col, &arity)) in columns.iter().zip(&arities).enumerate() {
            if col.len() != rows {
                return input(format!("column {j} has {} rows, expected {rows}", col.len()));
            }
            if arity < 2 || arity > u16::MAX as usize {
                return input(format!("column {j} has arity {arity}"));
            }
            if let Some(&bad) = col.iter().find(|&&c| c as usize >= arity) {
                return input(format!("column {j} has code {bad} outside arity {arity}"));
            }
        }
        let labels = vec![Vec::new(); columns.len()];
        Ok(Self {
            names,
            arities,
            columns,
            labels,
        })
    }

    /// Data set with columns named `X0, X1, ...`.
    pub fn from_columns(arities: Vec<usize>, columns: Vec<Vec<u16>>) -> Result<Self> {
        let names = (0..columns.len()).map(|j| format!("X{j}")).collect();
        Self::new(names, arities, columns)
    }

    /// Builds from row-major codes.
    pub fn from_rows(arities: Vec<usize>, rows: &[Vec<u16>]) -> Result<Self> {
        let n = arities.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return input(format!("row {i} has {} cells, expected {n}", row.len()));
            }
            for (col, &c) in columns.iter_mut().zip(row) {
                col.push(c);
            }
        }
        Self::from_columns(arities, columns)
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn arity(&self, j: usize) -> usize {
        self.arities[j]
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn column(&self, j: usize) -> &[u16] {
        &self.columns[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self, j: usize) -> &[String] {
        &self.labels[j]
    }

    /// Row subset, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return input("row selection is empty");
        }
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.n_rows()) {
            return input(format!("row {bad} out of range"));
        }
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        Ok(Self {
            names: self.names.clone(),
            arities: self.arities.clone(),
            columns,
            labels: self.labels.clone(),
        })
    }

    /// Swaps in a recoded column of the same length.
    pub fn replace_column(&mut self, j: usize, codes: Vec<u16>, arity: usize, labels: Vec<String>) -> Result<()> {
        if j >= self.n_vars() || codes.len() != self.n_rows() {
            return input(format!("replacement for column {j} does not fit"));
        }
        if arity < 2 || codes.iter().any(|&c| c as usize >= arity) {
            return input(format!("replacement for column {j} has codes outside arity {arity}"));
        }
        self.columns[j] = codes;
        self.arities[j] = arity;
        self.labels[j] = labels;
        Ok(())
    }

    /// Reads comma-separated values: a header row of column names, then one
    /// row of category labels per data point. Labels become codes in order
    /// of first occurrence.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let (names, raw) = read_raw_csv(reader)?;
        Self::from_labels(names, &raw)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    /// Encodes columns of string labels.
    pub fn from_labels(names: Vec<String>, raw_columns: &[Vec<String>]) -> Result<Self> {
        let mut columns = Vec::with_capacity(raw_columns.len());
        let mut arities = Vec::with_capacity(raw_columns.len());
        let mut labels = Vec::with_capacity(raw_columns.len());
        for (j, raw) in raw_columns.iter().enumerate() {
            let mut index: HashMap<&str, u16> = HashMap::new();
            let mut col_labels: Vec<String> = Vec::new();
            let mut codes = Vec::with_capacity(raw.len());
            for label in raw {
                let next = col_labels.len();
                let code = *index.entry(label.as_str()).or_insert_with(|| {
                    col_labels.push(label.clone());
                    next as u16
                });
                if col_labels.len() > u16::MAX as usize {
                    return input(format!("column {j} has too many categories"));
                }
                codes.push(code);
            }
            // a column observed at a single level still has a binary domain
            arities.push(col_labels.len().max(2));
            columns.push(codes);
            labels.push(col_labels);
        }
        let mut ds = Self::new(names, arities, columns)?;
        ds.labels = labels;
        Ok(ds)
    }

    /// Writes the data set as CSV with its labels (or codes when unlabeled).
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.names)?;
        let mut row = Vec::with_capacity(self.n_vars());
        for r in 0..self.n_rows() {
            row.clear();
            for j in 0..self.n_vars() {
                let code = self.columns[j][r] as usize;
                row.push(match self.labels[j].get(code) {
                    Some(l) => l.clone(),
                    None => code.to_string(),
                });
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Header names and raw string columns of a CSV stream.
pub fn read_raw_csv<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let mut cols = vec![Vec::new(); names.len()];
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != names.len() {
            return input(format!(
                "row has {} fields, header has {}",
                rec.len(),
                names.len()
            ));
        }
        for (c, field) in cols.iter_mut().zip(rec.iter()) {
            c.push(field.to_owned());
        }
    }
    Ok((names, cols))
}
