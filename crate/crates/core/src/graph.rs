//! Undirected graphs over `{0, ..., n-1}` and vertex separation.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{input, parse_err, Result};
use crate::varset::{VarSet, MAX_VARS};

/// Simple undirected graph: no self-loops, no parallel edges.
///
/// Adjacency is stored as one [`VarSet`] row per vertex, so separation
/// queries expand whole BFS frontiers with word-wise unions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UndirectedGraph {
    adj: Vec<VarSet>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VARS {
            return input(format!("domain size {n} exceeds the maximum {MAX_VARS}"));
        }
        Ok(Self {
            adj: vec![VarSet::EMPTY; n],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            g.adj[u] = VarSet::full(n).without(u);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_var(u)?;
        self.check_var(v)?;
        if u == v {
            return input(format!("self-loop on vertex {u}"));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_var(u)?;
        self.check_var(v)?;
        self.adj[u].remove(v);
        self.adj[v].remove(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> VarSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VarSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    fn check_var(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return input(format!("variable {v} out of range for n = {}", self.n()));
        }
        Ok(())
    }

    fn check_set(&self, s: &VarSet, what: &str) -> Result<()> {
        if s.upper_bound() > self.n() {
            return input(format!("{what} {s} has members outside [0, {})", self.n()));
        }
        Ok(())
    }

    /// Whether `z` separates `x` from `y`: after deleting the vertices of
    /// `z`, no path joins them.
    pub fn vertex_separated(&self, x: usize, y: usize, z: &VarSet) -> Result<bool> {
        self.check_var(x)?;
        self.check_var(y)?;
        self.check_set(z, "conditioning set")?;
        if x == y {
            return input(format!("separation query needs distinct endpoints, got {x} twice"));
        }
        if z.contains(x) || z.contains(y) {
            return input(format!("conditioning set {z} contains an endpoint of ({x}, {y})"));
        }
        Ok(!self.reaches(VarSet::singleton(x), VarSet::singleton(y), z))
    }

    /// Set-valued separation: no member of `xs` reaches a member of `ys`
    /// once `z` is deleted.
    pub fn set_separated(&self, xs: &VarSet, ys: &VarSet, z: &VarSet) -> Result<bool> {
        self.check_set(xs, "endpoint set")?;
        self.check_set(ys, "endpoint set")?;
        self.check_set(z, "conditioning set")?;
        if xs.is_empty() || ys.is_empty() {
            return input("separation endpoints must be nonempty");
        }
        if !xs.is_disjoint(ys) || !xs.is_disjoint(z) || !ys.is_disjoint(z) {
            return input(format!("sets {xs}, {ys}, {z} are not pairwise disjoint"));
        }
        Ok(!self.reaches(*xs, *ys, z))
    }

    // Breadth-first search from `from` over V - z; true when `to` is hit.
    fn reaches(&self, from: VarSet, to: VarSet, z: &VarSet) -> bool {
        let allowed = VarSet::full(self.n()).difference(z);
        let mut seen = from;
        let mut frontier = from;
        while !frontier.is_empty() {
            let mut next = VarSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(&self.adj[v]);
            }
            next = next.intersection(&allowed).difference(&seen);
            if !next.is_disjoint(&to) {
                return true;
            }
            seen = seen.union(&next);
            frontier = next;
        }
        false
    }

    /// Vertices reachable from `v` (including `v`).
    pub fn component_of(&self, v: usize) -> VarSet {
        let mut seen = VarSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VarSet::EMPTY;
            for u in frontier.iter() {
                next = next.union(&self.adj[u]);
            }
            next = next.difference(&seen);
            seen = seen.union(&next);
            frontier = next;
        }
        seen
    }

    /// Number of vertex pairs whose adjacency differs between the graphs.
    pub fn hamming_distance(&self, other: &UndirectedGraph) -> Result<usize> {
        if self.n() != other.n() {
            return input(format!(
                "graphs have different sizes ({} vs {})",
                self.n(),
                other.n()
            ));
        }
        let twice: usize = self
            .adj
            .iter()
            .zip(other.adj.iter())
            .map(|(a, b)| a.union(b).difference(&a.intersection(b)).len())
            .sum();
        Ok(twice / 2)
    }

    /// Edge symmetric difference divided by `n(n-1)/2`. Zero for `n < 2`.
    pub fn normalized_hamming(&self, other: &UndirectedGraph) -> Result<f64> {
        let d = self.hamming_distance(other)?;
        let n = self.n();
        let pairs = n * n.saturating_sub(1) / 2;
        Ok(if pairs == 0 { 0.0 } else { d as f64 / pairs as f64 })
    }

    /// Canonical text form: `n <count>` then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n {}", self.n()).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut graph: Option<UndirectedGraph> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (&mut graph, fields.as_slice()) {
                (None, ["n", count]) => {
                    let n: usize = count
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad vertex count {count:?}")))?;
                    graph = Some(
                        UndirectedGraph::empty(n).map_err(|e| parse_err(line_no, e.to_string()))?,
                    );
                }
                (None, _) => return Err(parse_err(line_no, "expected header `n <count>`")),
                (Some(g), [u, v]) => {
                    let parse_idx = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| parse_err(line_no, format!("bad vertex index {s:?}")))
                    };
                    let (u, v) = (parse_idx(u)?, parse_idx(v)?);
                    if u >= v {
                        return Err(parse_err(line_no, format!("edge `{u} {v}` must satisfy u < v")));
                    }
                    g.add_edge(u, v)
                        .map_err(|e| parse_err(line_no, e.to_string()))?;
                }
                (Some(_), _) => return Err(parse_err(line_no, "expected `u v` edge line")),
            }
        }
        graph.ok_or_else(|| parse_err(0, "missing header `n <count>`"))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}
