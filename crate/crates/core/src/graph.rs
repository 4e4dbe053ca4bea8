//! SEP points, their support graphs and 1-path structure.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Undirected edge of `K_n`, stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge(usize, usize);

impl Edge {
    /// Panics on a loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(i: usize, j: usize) -> Edge {
        Edge::try_new(i, j).expect("edge endpoints must differ")
    }

    pub fn try_new(i: usize, j: usize) -> Result<Edge> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok(Edge(i, j)),
            std::cmp::Ordering::Greater => Ok(Edge(j, i)),
            std::cmp::Ordering::Equal => Err(Error::InvalidPoint(format!("loop at node {i}"))),
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`.
    pub fn other(self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            debug_assert_eq!(self.1, v);
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;
    fn try_from(v: [usize; 2]) -> Result<Edge> {
        Edge::try_new(v[0], v[1])
    }
}

/// All edges of `K_n` in lexicographic order.
pub fn complete_edges(n: usize) -> Vec<Edge> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| Edge(i, j)))
        .collect()
}

/// Undirected graph on `0..n` with one rational label per edge (a weight or a cost).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(Edge, Rational)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Edge, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, w) in edges {
            if e.hi() >= n {
                return Err(Error::InvalidPoint(format!("edge {e} out of range for n={n}")));
            }
            if map.insert(e, w).is_some() {
                return Err(Error::InvalidPoint(format!("duplicate edge {e}")));
            }
        }
        Ok(WeightedGraph {
            n,
            edges: map.into_iter().collect(),
        })
    }

    /// Unit labels on the given edges.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|e| (e, Rational::one())))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted lexicographically with their labels.
    pub fn edges(&self) -> &[(Edge, Rational)] {
        &self.edges
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.iter().map(|(e, _)| *e).collect()
    }

    pub fn index_of(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search_by(|(f, _)| f.cmp(&e)).ok()
    }

    pub fn label(&self, e: Edge) -> Option<&Rational> {
        self.index_of(e).map(|i| &self.edges[i].1)
    }

    /// For each node, the indices (into [`Self::edges`]) of incident edges.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (k, (e, _)) in self.edges.iter().enumerate() {
            inc[e.lo()].push(k);
            inc[e.hi()].push(k);
        }
        inc
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(e, _)| e.contains(v)).count()
    }

    /// Same graph with labels replaced edge by edge.
    pub fn relabel_edges(&self, labels: impl IntoIterator<Item = Rational>) -> WeightedGraph {
        let edges = self
            .edges
            .iter()
            .zip(labels)
            .map(|((e, _), w)| (*e, w))
            .collect::<Vec<_>>();
        assert_eq!(edges.len(), self.edges.len());
        WeightedGraph { n: self.n, edges }
    }

    /// Applies the node permutation `perm` (old node `v` becomes `perm[v]`).
    pub fn permute(&self, perm: &[usize]) -> WeightedGraph {
        WeightedGraph::new(
            self.n,
            self.edges
                .iter()
                .map(|(e, w)| (Edge::new(perm[e.lo()], perm[e.hi()]), w.clone())),
        )
        .expect("a permutation maps a simple graph to a simple graph")
    }

    pub fn is_connected(&self) -> bool {
        self.unreachable_from_zero().is_none()
    }

    /// First node not reachable from node 0, if any.
    pub fn unreachable_from_zero(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let mut uf = UnionFind::new(self.n);
        for (e, _) in &self.edges {
            uf.union(e.lo(), e.hi());
        }
        (1..self.n).find(|&v| uf.find(v) != uf.find(0))
    }
}

/// Plain union-find, used for connectivity checks throughout.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns `true` if the two sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Symmetric cost matrix on `K_n` with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl CostMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(Edge) -> Rational) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for e in complete_edges(n) {
            let c = f(e);
            entries[e.lo() * n + e.hi()] = c.clone();
            entries[e.hi() * n + e.lo()] = c;
        }
        CostMatrix { n, entries }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn cost(&self, e: Edge) -> &Rational {
        self.get(e.lo(), e.hi())
    }

    /// `c · x` over the support of `x`.
    pub fn dot(&self, x: &SepPoint) -> Rational {
        x.weights().iter().map(|(e, w)| self.cost(*e) * w).sum()
    }

    /// Every `(i, j, k)` with `c_ik + c_kj >= c_ij`.
    pub fn is_metric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| self.get(i, k) + self.get(k, j) >= *self.get(i, j))
            })
        })
    }
}

/// A point of `R^{E_n}` with weights in `(0, 1]` on its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SepPoint {
    n: usize,
    weights: BTreeMap<Edge, Rational>,
}

impl SepPoint {
    /// Zero weights are dropped; negative weights or weights above 1 are rejected.
    pub fn new(n: usize, weights: impl IntoIterator<Item = (Edge, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, w) in weights {
            if e.hi() >= n {
                return Err(Error::InvalidPoint(format!("edge {e} out of range for n={n}")));
            }
            if w.is_negative() || w > Rational::one() {
                return Err(Error::InvalidPoint(format!("weight {w} on {e} outside [0,1]")));
            }
            if w.is_zero() {
                continue;
            }
            if map.insert(e, w).is_some() {
                return Err(Error::InvalidPoint(format!("duplicate edge {e}")));
            }
        }
        Ok(SepPoint { n, weights: map })
    }

    /// Characteristic vector of the tour visiting `order` cyclically.
    pub fn tour(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let edges = (0..n)
            .map(|i| Edge::try_new(order[i], order[(i + 1) % n]))
            .collect::<Result<Vec<_>>>()?;
        SepPoint::new(n, edges.into_iter().map(|e| (e, Rational::one())))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, e: Edge) -> Rational {
        self.weights.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn weights(&self) -> &BTreeMap<Edge, Rational> {
        &self.weights
    }

    pub fn one_edges(&self) -> Vec<Edge> {
        self.weights
            .iter()
            .filter(|(_, w)| w.is_one())
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.weights.values().all(|w| w.is_one())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.weights.keys().filter(|e| e.contains(v)).count()
    }

    /// `x(δ(v))`.
    pub fn weighted_degree(&self, v: usize) -> Rational {
        self.weights
            .iter()
            .filter(|(e, _)| e.contains(v))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn permute(&self, perm: &[usize]) -> SepPoint {
        SepPoint::new(
            self.n,
            self.weights
                .iter()
                .map(|(e, w)| (Edge::new(perm[e.lo()], perm[e.hi()]), w.clone())),
        )
        .expect("a permutation keeps the point valid")
    }
}

/// `G_x`: exactly the edges of positive weight, labelled by their weight.
pub fn support_graph(x: &SepPoint) -> WeightedGraph {
    WeightedGraph {
        n: x.n,
        edges: x.weights.iter().map(|(e, w)| (*e, w.clone())).collect(),
    }
}

/// Maximal path of 1-edges, listed end to end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnePath {
    nodes: Vec<usize>,
}

impl OnePath {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn internal(&self) -> &[usize] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.nodes.windows(2).map(|w| Edge::new(w[0], w[1])).collect()
    }
}

/// Partitions the 1-edges of `x` into maximal paths.
///
/// Paths are oriented so the smaller end node comes first, and sorted.
pub fn one_paths(x: &SepPoint) -> Result<Vec<OnePath>> {
    let ones = x.one_edges();
    if ones.is_empty() {
        return Err(Error::NoOneEdges);
    }
    let mut adj = vec![Vec::new(); x.n];
    for e in &ones {
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
    }
    if let Some(v) = (0..x.n).find(|&v| adj[v].len() > 2) {
        return Err(Error::InvalidPoint(format!(
            "node {v} carries more than two 1-edges"
        )));
    }
    let mut visited = vec![false; x.n];
    let mut paths = Vec::new();
    for start in 0..x.n {
        if visited[start] || adj[start].len() != 1 {
            continue;
        }
        let mut nodes = vec![start];
        visited[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adj[cur].iter().copied().find(|&u| u != prev);
            match next {
                Some(u) if !visited[u] => {
                    visited[u] = true;
                    nodes.push(u);
                    prev = cur;
                    cur = u;
                }
                _ => break,
            }
        }
        if nodes.last() < nodes.first() {
            nodes.reverse();
        }
        paths.push(OnePath { nodes });
    }
    // A node with two 1-edges that was never reached lies on a cycle of 1-edges.
    if let Some(v) = (0..x.n).find(|&v| !visited[v] && !adj[v].is_empty()) {
        return Err(Error::InvalidPoint(format!(
            "1-edges through node {v} form a cycle"
        )));
    }
    paths.sort();
    Ok(paths)
}
