//! Dense simple graphs, strong regularity and the 4-vertex condition.
//!
//! Adjacency rows are stored as packed bit rows so that common-neighbour
//! counts (the entries of `A²`) are popcounts of row intersections.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("adjacency matrix is not square")]
    NotSquare,
    #[error("graph is not strongly regular")]
    NotStronglyRegular,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

const WORD: usize = 64;

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

/// Parameters `(n, k, λ, μ)` of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    pub fn new(n: u64, k: u64, lambda: u64, mu: u64) -> Self {
        SrgParams { n, k, lambda, mu }
    }

    /// `k(k − λ − 1) = (n − k − 1)μ`, together with the range constraints.
    pub fn satisfies_counting_identity(&self) -> bool {
        if self.n <= self.k || self.k == 0 || self.lambda >= self.k || self.mu > self.k {
            return false;
        }
        let lhs = self.k as u128 * (self.k - self.lambda - 1) as u128;
        let rhs = (self.n - self.k - 1) as u128 * self.mu as u128;
        lhs == rhs
    }

    /// Parameters of the complementary graph, `None` when a formula goes negative.
    pub fn complement(&self) -> Option<SrgParams> {
        let (n, k, l, m) = (self.n, self.k, self.lambda, self.mu);
        Some(SrgParams {
            n,
            k: n.checked_sub(k + 1)?,
            lambda: (n + m).checked_sub(2 * k + 2)?,
            mu: (n + l).checked_sub(2 * k)?,
        })
    }
}

impl std::fmt::Display for SrgParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.k, self.lambda, self.mu)
    }
}

impl Graph {
    fn empty(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    /// Builds a graph from an edge list. Every pair must be in range, loopless
    /// and listed at most once (in either orientation).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::OutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adjacent(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set(u, v);
            g.set(v, u);
        }
        Ok(g)
    }

    pub fn from_adjacency(rows: &[Vec<bool>]) -> Result<Self, GraphError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::NotSquare);
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            if rows[u][u] {
                return Err(GraphError::SelfLoop(u));
            }
            for v in 0..n {
                if rows[u][v] != rows[v][u] {
                    return Err(GraphError::NotSymmetric(u, v));
                }
                if rows[u][v] {
                    g.set(u, v);
                }
            }
        }
        Ok(g)
    }

    /// Graph on `n` vertices with `u ~ v` iff `adj(u, v)`; the predicate is
    /// only consulted for `u < v`.
    pub fn from_fn(n: usize, mut adj: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adj(u, v) {
                    g.set(u, v);
                    g.set(v, u);
                }
            }
        }
        g
    }

    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / WORD] |= 1 << (v % WORD);
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.adjacent(u, v))
    }

    /// Number of common neighbours of `u` and `v`, i.e. `(A²)[u][v]`.
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&w| self.adjacent(u, w) && self.adjacent(v, w))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        Graph::from_fn(vertices.len(), |a, b| {
            self.adjacent(vertices[a], vertices[b])
        })
    }

    pub fn complement(&self) -> Graph {
        Graph::from_fn(self.n, |u, v| !self.adjacent(u, v))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut part = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        part.push(v);
                        stack.push(v);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Returns `(n, k, λ, μ)` when the graph is strongly regular.
    ///
    /// Evaluates `A² = kI + λA + μ(J − I − A)` entrywise in integers. Complete
    /// and edgeless graphs are rejected since one of λ, μ is then undefined.
    pub fn check_srg(&self) -> Option<SrgParams> {
        let n = self.n;
        if n < 2 {
            return None;
        }
        let k = self.degree(0);
        if (1..n).any(|u| self.degree(u) != k) {
            return None;
        }
        if k == 0 || k == n - 1 {
            return None;
        }
        let mut lambda = None;
        let mut mu = None;
        for u in 0..n {
            for v in u + 1..n {
                let c = self.common_neighbor_count(u, v);
                let slot = if self.adjacent(u, v) {
                    &mut lambda
                } else {
                    &mut mu
                };
                match *slot {
                    None => *slot = Some(c),
                    Some(x) if x != c => return None,
                    _ => {}
                }
            }
        }
        Some(SrgParams::new(
            n as u64,
            k as u64,
            lambda? as u64,
            mu? as u64,
        ))
    }

    /// Checks the 4-vertex condition: the number of edges inside the common
    /// neighbourhood of `u, v` depends only on whether `u ~ v`.
    ///
    /// Returns `(α, β)` for adjacent and non-adjacent pairs respectively.
    pub fn four_vertex_condition(&self) -> Result<Option<(usize, usize)>, GraphError> {
        if self.check_srg().is_none() {
            return Err(GraphError::NotStronglyRegular);
        }
        let mut alpha = None;
        let mut beta = None;
        for u in 0..self.n {
            for v in u + 1..self.n {
                let common = self.common_neighbors(u, v);
                let mut inner = 0;
                for (i, &x) in common.iter().enumerate() {
                    inner += common[i + 1..]
                        .iter()
                        .filter(|&&y| self.adjacent(x, y))
                        .count();
                }
                let slot = if self.adjacent(u, v) {
                    &mut alpha
                } else {
                    &mut beta
                };
                match *slot {
                    None => *slot = Some(inner),
                    Some(x) if x != inner => return Ok(None),
                    _ => {}
                }
            }
        }
        // check_srg guarantees both kinds of pair exist
        Ok(Some((alpha.unwrap_or(0), beta.unwrap_or(0))))
    }

    /// Graph text format: `"n m"`, then `m` lines `"u v"` with `u < v`, sorted.
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut s = String::with_capacity(8 * edges.len() + 16);
        writeln!(s, "{} {}", self.n, edges.len()).unwrap();
        for (u, v) in edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Parses the graph text format produced by [`Graph::to_text`].
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let err = |line: usize, msg: &str| GraphError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let (n, m) = parse_pair(header).ok_or_else(|| err(1, "expected \"n m\""))?;
        if n > MAX_VERTICES {
            return Err(err(1, "vertex count too large"));
        }
        if m > n.saturating_mul(n.saturating_sub(1)) / 2 {
            return Err(err(1, "edge count exceeds n(n-1)/2"));
        }
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| err(i + 2, "truncated edge list"))?;
            let (u, v) = parse_pair(line).ok_or_else(|| err(i + 2, "expected \"u v\""))?;
            if u >= v {
                return Err(err(i + 2, "edge endpoints must satisfy u < v"));
            }
            if let Some(&prev) = edges.last() {
                if (u, v) <= prev {
                    return Err(err(i + 2, "edges must be strictly sorted"));
                }
            }
            edges.push((u, v));
        }
        if let Some(extra) = lines.next() {
            if !extra.is_empty() || lines.next().is_some() {
                return Err(err(m + 2, "trailing content after edge list"));
            }
        }
        Graph::new(n, &edges).map_err(|e| err(1, &e.to_string()))
    }
}

/// Upper bound on vertex counts accepted by the text parsers.
pub const MAX_VERTICES: usize = 1 << 14;

pub(crate) fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split(' ');
    let a = parse_decimal(it.next()?)?;
    let b = parse_decimal(it.next()?)?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Strict unsigned decimal: digits only, no sign or surrounding whitespace.
pub(crate) fn parse_decimal(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Small named graphs used throughout the tests and examples.
pub mod named {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        Graph::from_fn(n, |_, _| true)
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::from_fn(n, |_, _| false)
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_fn(n, |u, v| v - u == 1 || (u == 0 && v == n - 1))
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_fn(n, |u, v| v - u == 1)
    }

    /// Kneser graph K(5, 2): 2-subsets of a 5-set, adjacent when disjoint.
    pub fn petersen() -> Graph {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        Graph::from_fn(10, |x, y| {
            let (a, b) = pairs[x];
            let (c, d) = pairs[y];
            a != c && a != d && b != c && b != d
        })
    }

    /// The m×m rook's graph (lattice graph): cells adjacent when they share a row or column.
    pub fn rook(m: usize) -> Graph {
        Graph::from_fn(m * m, |x, y| x / m == y / m || x % m == y % m)
    }
}
