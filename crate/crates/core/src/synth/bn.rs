use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{input, parse_err, Error, Result};
use crate::graph::{strip_comment, UndirectedGraph};

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Discrete Bayesian network with tabular conditional distributions.
#[derive(Clone, Debug, PartialEq)]
pub struct BNModel {
    names: Vec<String>,
    arities: Vec<usize>,
    parents: Vec<Vec<usize>>,
    /// One row per parent configuration, first parent most significant.
    cpts: Vec<Vec<Vec<f64>>>,
    topo: Vec<usize>,
}

impl BNModel {
    pub fn new(
        names: Vec<String>,
        arities: Vec<usize>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let n = names.len();
        if arities.len() != n || parents.len() != n || cpts.len() != n {
            return input("names, arities, parents and tables must have one entry per variable");
        }
        for v in 0..n {
            if arities[v] < 2 || arities[v] > u16::MAX as usize {
                return input(format!("variable {} has arity {}", names[v], arities[v]));
            }
            let mut seen = vec![false; n];
            for &p in &parents[v] {
                if p >= n || p == v || std::mem::replace(&mut seen[p], true) {
                    return input(format!("bad parent list for {}", names[v]));
                }
            }
            let configs: usize = parents[v].iter().map(|&p| arities[p]).product();
            if cpts[v].len() != configs {
                return input(format!(
                    "table of {} has {} rows, expected {configs}",
                    names[v],
                    cpts[v].len()
                ));
            }
            for row in &cpts[v] {
                if row.len() != arities[v] || row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                    return input(format!("malformed probability row for {}", names[v]));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return input(format!("row of {} sums to {sum}", names[v]));
                }
            }
        }
        let topo = topological_order(&parents)
            .ok_or_else(|| Error::Input("the parent relation has a cycle".into()))?;
        Ok(Self {
            names,
            arities,
            parents,
            cpts,
            topo,
        })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn cpt(&self, v: usize) -> &[Vec<f64>] {
        &self.cpts[v]
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    fn config_index(&self, v: usize, state: &[u16]) -> usize {
        self.parents[v]
            .iter()
            .fold(0, |acc, &p| acc * self.arities[p] + state[p] as usize)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in 0..self.n() {
            writeln!(s, "variable {} arity {}", self.names[v], self.arities[v]).unwrap();
        }
        for v in 0..self.n() {
            if !self.parents[v].is_empty() {
                let ps: Vec<&str> = self.parents[v].iter().map(|&p| self.names[p].as_str()).collect();
                writeln!(s, "parents {} {}", self.names[v], ps.join(" ")).unwrap();
            }
        }
        for v in 0..self.n() {
            writeln!(s, "cpt {}", self.names[v]).unwrap();
            for row in &self.cpts[v] {
                let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
                writeln!(s, "{}", cells.join(" ")).unwrap();
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut arities = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut parents: Vec<Option<Vec<usize>>> = Vec::new();
        let mut cpts: Vec<Option<Vec<Vec<f64>>>> = Vec::new();
        let mut current: Option<usize> = None;
        let lookup = |index: &HashMap<String, usize>, name: &str, line: usize| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| parse_err(line, format!("unknown variable {name:?}")))
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["variable", name, "arity", k] => {
                    let k: usize = k
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad arity {k:?}")))?;
                    if index.insert(name.to_string(), names.len()).is_some() {
                        return Err(parse_err(line_no, format!("duplicate variable {name:?}")));
                    }
                    names.push(name.to_string());
                    arities.push(k);
                    parents.push(None);
                    cpts.push(None);
                    current = None;
                }
                ["parents", name, ps @ ..] => {
                    let v = lookup(&index, name, line_no)?;
                    let ps = ps
                        .iter()
                        .map(|p| lookup(&index, p, line_no))
                        .collect::<Result<Vec<_>>>()?;
                    if parents[v].replace(ps).is_some() {
                        return Err(parse_err(line_no, format!("parents of {name:?} given twice")));
                    }
                    current = None;
                }
                ["cpt", name] => {
                    let v = lookup(&index, name, line_no)?;
                    if cpts[v].replace(Vec::new()).is_some() {
                        return Err(parse_err(line_no, format!("table of {name:?} given twice")));
                    }
                    current = Some(v);
                }
                row => {
                    let v = current.ok_or_else(|| parse_err(line_no, "probability row outside a table"))?;
                    let row = row
                        .iter()
                        .map(|c| {
                            c.parse::<f64>()
                                .map_err(|_| parse_err(line_no, format!("bad probability {c:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    cpts[v].as_mut().unwrap().push(row);
                }
            }
        }
        let cpts = cpts
            .into_iter()
            .zip(&names)
            .map(|(c, name)| c.ok_or_else(|| parse_err(0, format!("no table for {name:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let parents = parents.into_iter().map(Option::unwrap_or_default).collect();
        Self::new(names, arities, parents, cpts)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Kahn's algorithm, lowest ready index first; `None` on a cycle.
fn topological_order(parents: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = parents.len();
    let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (v, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(v);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| pending[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.insert(c);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Ancestral sampling: each row draws every variable after its parents.
pub fn logic_sample(model: &BNModel, rows: usize, seed: u64) -> Result<Dataset> {
    if rows == 0 {
        return input("at least one row must be sampled");
    }
    let n = model.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns = vec![Vec::with_capacity(rows); n];
    let mut state = vec![0u16; n];
    for _ in 0..rows {
        for &v in model.topological_order() {
            let row = &model.cpts[v][model.config_index(v, &state)];
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            // falls back to the last category when rounding leaves u uncovered
            let mut pick = row.len() - 1;
            for (k, &p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    pick = k;
                    break;
                }
            }
            state[v] = pick as u16;
        }
        for (c, &s) in columns.iter_mut().zip(&state) {
            c.push(s);
        }
    }
    Dataset::new(model.names.clone(), model.arities.clone(), columns)
}

/// Skeleton plus an edge between every two parents of a common child.
pub fn moralize(model: &BNModel) -> Result<UndirectedGraph> {
    let mut g = UndirectedGraph::empty(model.n())?;
    for v in 0..model.n() {
        let ps = model.parents(v);
        for (i, &p) in ps.iter().enumerate() {
            g.add_edge(p, v)?;
            for &q in &ps[i + 1..] {
                g.add_edge(p, q)?;
            }
        }
    }
    Ok(g)
}
