//! Hamiltonian walks on support graphs: closed walks visiting every node, each
//! edge used at most twice. A walk is identified with its multiplicity vector.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, UnionFind, WeightedGraph};
use crate::rational::{common_denominator, Rational};
use crate::tsp::{held_karp, MAX_TSP_NODES};

pub const MAX_ENUMERATION_EDGES: usize = 14;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<[usize; 3]>", into = "Vec<[usize; 3]>")]
pub struct Walk {
    mult: BTreeMap<Edge, u8>,
}

impl Walk {
    /// Zero multiplicities are dropped; anything above 2 is rejected.
    pub fn new(mult: impl IntoIterator<Item = (Edge, u8)>) -> Result<Walk> {
        let mut map = BTreeMap::new();
        for (e, m) in mult {
            if m > 2 {
                return Err(Error::InvalidPoint(format!("multiplicity {m} on {e}")));
            }
            if m > 0 && map.insert(e, m).is_some() {
                return Err(Error::InvalidPoint(format!("duplicate edge {e} in walk")));
            }
        }
        Ok(Walk { mult: map })
    }

    /// Each consecutive pair of `order` (cyclically) used once.
    pub fn tour(order: &[usize]) -> Result<Walk> {
        let n = order.len();
        let mut mult: BTreeMap<Edge, u8> = BTreeMap::new();
        for i in 0..n {
            *mult.entry(Edge::try_new(order[i], order[(i + 1) % n])?).or_default() += 1;
        }
        Walk::new(mult)
    }

    pub fn multiplicity(&self, e: Edge) -> u8 {
        self.mult.get(&e).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &BTreeMap<Edge, u8> {
        &self.mult
    }

    /// `Σ c_e w_e` for costs given by the labels of `g`. Edges missing from `g`
    /// count as zero.
    pub fn cost(&self, g: &WeightedGraph) -> Rational {
        self.mult
            .iter()
            .filter_map(|(e, m)| g.label(*e).map(|c| c * Rational::from_integer((*m).into())))
            .sum()
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.mult
            .iter()
            .filter(|(e, _)| e.contains(v))
            .map(|(_, m)| *m as u32)
            .sum()
    }
}

impl From<Walk> for Vec<[usize; 3]> {
    fn from(w: Walk) -> Self {
        w.mult.into_iter().map(|(e, m)| [e.lo(), e.hi(), m as usize]).collect()
    }
}

impl TryFrom<Vec<[usize; 3]>> for Walk {
    type Error = Error;

    fn try_from(v: Vec<[usize; 3]>) -> Result<Walk> {
        let entries = v
            .into_iter()
            .map(|[i, j, m]| {
                let m = u8::try_from(m).map_err(|_| Error::Parse(format!("multiplicity {m}")))?;
                Ok((Edge::try_new(i, j)?, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Walk::new(entries)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mult.iter().map(|(e, m)| format!("{e}x{m}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WalkViolation {
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("node {node} has odd degree {degree}")]
    OddDegree { node: usize, degree: u32 },
    #[error("node {0} is not visited")]
    Uncovered(usize),
    #[error("walk is disconnected; component {0:?} is separate from node 0")]
    Disconnected(Vec<usize>),
}

/// Checks the walk conditions in order: edges of `g`, even degrees, every node
/// covered, connected.
pub fn is_valid_walk(g: &WeightedGraph, w: &Walk) -> Result<(), WalkViolation> {
    let n = g.node_count();
    if let Some(e) = w.mult.keys().find(|e| g.index_of(**e).is_none()) {
        return Err(WalkViolation::UnknownEdge(*e));
    }
    let mut deg = vec![0u32; n];
    for (e, m) in &w.mult {
        deg[e.lo()] += *m as u32;
        deg[e.hi()] += *m as u32;
    }
    if let Some(v) = (0..n).find(|&v| deg[v] % 2 == 1) {
        return Err(WalkViolation::OddDegree { node: v, degree: deg[v] });
    }
    if n > 1 {
        if let Some(v) = (0..n).find(|&v| deg[v] == 0) {
            return Err(WalkViolation::Uncovered(v));
        }
    }
    let mut uf = UnionFind::new(n);
    for e in w.mult.keys() {
        uf.union(e.lo(), e.hi());
    }
    let root = uf.find(0);
    let apart: Vec<usize> = (0..n).filter(|&v| uf.find(v) != root).collect();
    if !apart.is_empty() {
        let r = uf.find(apart[0]);
        let comp = apart.into_iter().filter(|&v| uf.find(v) == r).collect();
        return Err(WalkViolation::Disconnected(comp));
    }
    Ok(())
}

/// Every walk on `g`, sorted.
pub fn enumerate_walks(g: &WeightedGraph) -> Result<Vec<Walk>> {
    let m = g.edge_count();
    if m > MAX_ENUMERATION_EDGES {
        return Err(Error::TooLarge {
            what: "edge count for walk enumeration",
            got: m,
            limit: MAX_ENUMERATION_EDGES,
        });
    }
    let edges = g.edge_list();
    let n = g.node_count();
    // Nodes whose incident edges are all decided after edge `k`.
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..n {
        if let Some(last) = edges.iter().rposition(|e| e.contains(v)) {
            closes[last].push(v);
        }
    }
    if n > 1 && (0..n).any(|v| g.degree(v) == 0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut current = vec![0u8; m];
    let mut deg = vec![0u32; n];
    fn rec(
        k: usize,
        edges: &[Edge],
        closes: &[Vec<usize>],
        current: &mut Vec<u8>,
        deg: &mut Vec<u32>,
        g: &WeightedGraph,
        out: &mut Vec<Walk>,
    ) {
        if k == edges.len() {
            let w = Walk {
                mult: edges
                    .iter()
                    .zip(current.iter())
                    .filter(|(_, m)| **m > 0)
                    .map(|(e, m)| (*e, *m))
                    .collect(),
            };
            if is_valid_walk(g, &w).is_ok() {
                out.push(w);
            }
            return;
        }
        let e = edges[k];
        for m in 0..=2u8 {
            deg[e.lo()] += m as u32;
            deg[e.hi()] += m as u32;
            current[k] = m;
            if closes[k].iter().all(|&v| deg[v] % 2 == 0 && deg[v] >= 2) {
                rec(k + 1, edges, closes, current, deg, g, out);
            }
            deg[e.lo()] -= m as u32;
            deg[e.hi()] -= m as u32;
        }
        current[k] = 0;
    }
    rec(0, &edges, &closes, &mut current, &mut deg, g, &mut out);
    out.sort();
    Ok(out)
}

/// A cheapest walk on `g`, whose edge labels are the (nonnegative) costs.
///
/// Walks on `g` and tours on the shortest-path closure of `g` have the same
/// optimum: a tour expands along shortest paths into a closed spanning walk,
/// and removing two copies of any edge used three or more times keeps it
/// closed, spanning and connected without raising the cost. The tour is found
/// by Held–Karp.
pub fn min_cost_walk(g: &WeightedGraph) -> Result<(Walk, Rational)> {
    let n = g.node_count();
    if let Some((e, _)) = g.edges().iter().find(|(_, c)| c.is_negative()) {
        return Err(Error::InvalidPoint(format!("negative cost on {e}")));
    }
    if let Some(v) = g.unreachable_from_zero() {
        return Err(Error::Disconnected(v));
    }
    if n > MAX_TSP_NODES {
        return Err(Error::TooLarge {
            what: "n for min-cost walk",
            got: n,
            limit: MAX_TSP_NODES,
        });
    }
    if n == 1 {
        return Ok((Walk::default(), Rational::zero()));
    }
    let scale = common_denominator(g.edges().iter().map(|(_, c)| c));
    let scaled: Vec<(Edge, BigInt)> = g
        .edges()
        .iter()
        .map(|(e, c)| (*e, c.numer() * (&scale / c.denom())))
        .collect();
    let total: BigInt = scaled.iter().map(|(_, c)| c).sum();
    let tour = match (&total * BigInt::from(4 * n)).to_i128() {
        Some(_) => {
            let small: Vec<(Edge, i128)> =
                scaled.iter().map(|(e, c)| (*e, c.to_i128().unwrap())).collect();
            closure_tour(n, &small)
        }
        None => closure_tour(n, &scaled),
    };
    let walk = walk_from_tour(&tour.0, &tour.1)?;
    let cost = walk.cost(g);
    Ok((walk, cost))
}

/// Optimal tour on the shortest-path closure plus the next-hop table.
fn closure_tour<T>(n: usize, edges: &[(Edge, T)]) -> (Vec<usize>, Vec<Vec<usize>>)
where
    T: Clone + Ord + Zero + Add<Output = T>,
{
    let mut dist: Vec<Vec<Option<T>>> = vec![vec![None; n]; n];
    let mut next = vec![vec![usize::MAX; n]; n];
    for v in 0..n {
        dist[v][v] = Some(T::zero());
        next[v][v] = v;
    }
    for (e, c) in edges {
        let (i, j) = (e.lo(), e.hi());
        dist[i][j] = Some(c.clone());
        dist[j][i] = Some(c.clone());
        next[i][j] = j;
        next[j][i] = i;
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k].clone() else { continue };
            for j in 0..n {
                let Some(kj) = dist[k][j].clone() else { continue };
                let via = ik.clone() + kj;
                if dist[i][j].as_ref().is_none_or(|d| via < *d) {
                    dist[i][j] = Some(via);
                    next[i][j] = next[i][k];
                }
            }
        }
    }
    let d: Vec<Vec<T>> = dist
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.expect("connected")).collect())
        .collect();
    (held_karp(&d).1, next)
}

fn walk_from_tour(tour: &[usize], next: &[Vec<usize>]) -> Result<Walk> {
    let n = tour.len();
    let mut count: BTreeMap<Edge, u32> = BTreeMap::new();
    for i in 0..n {
        let (mut u, v) = (tour[i], tour[(i + 1) % n]);
        while u != v {
            let h = next[u][v];
            *count.entry(Edge::new(u, h)).or_default() += 1;
            u = h;
        }
    }
    Walk::new(count.into_iter().map(|(e, m)| (e, reduce(m))))
}

fn reduce(m: u32) -> u8 {
    if m > 2 {
        (2 - m % 2) as u8
    } else {
        m as u8
    }
}

/// Nodes `a, a_1, ..., a_d, b` of the 1-path replacing `e` after `d` moves on a
/// graph with `n` nodes, matching [`crate::polytope::expand_edge`].
pub fn expansion_path(n: usize, e: Edge, d: usize) -> Vec<usize> {
    let mut p = vec![e.lo()];
    p.extend(n..n + d);
    p.push(e.hi());
    p
}

/// Carries a walk on `G_x` (with `n` nodes) to the graph where the 1-edge `e`
/// became a path with `d` internal nodes.
///
/// `class` must equal `w_e`. For class 1 or 2 the passages over `e` are
/// rerouted along the path. For class 0 the walk makes two excursions, from `a`
/// out to `a_k` and from `b` back to `a_{k+1}`, so the path edges on either side
/// of the gap `(a_k, a_{k+1})` are doubled and the gap itself is unused.
pub fn extend_walk(w: &Walk, n: usize, e: Edge, d: usize, class: u8, k: usize) -> Result<Walk> {
    let found = w.multiplicity(e);
    if found != class {
        return Err(Error::ClassMismatch { expected: class, found });
    }
    if class == 0 && k > d {
        return Err(Error::InvalidPoint(format!("excursion index {k} exceeds {d}")));
    }
    let path = expansion_path(n, e, d);
    let mut count: BTreeMap<Edge, u32> = w
        .mult
        .iter()
        .filter(|(f, _)| **f != e)
        .map(|(f, m)| (*f, *m as u32))
        .collect();
    for (i, pair) in path.windows(2).enumerate() {
        let m = match class {
            0 if i == k => 0,
            0 => 2,
            c => c as u32,
        };
        if m > 0 {
            *count.entry(Edge::new(pair[0], pair[1])).or_default() += m;
        }
    }
    Walk::new(count.into_iter().map(|(f, m)| (f, reduce(m))))
}

/// All walks the construction produces from `w`: `d + 1` of them for class 0,
/// one otherwise.
pub fn lift_walk(w: &Walk, n: usize, e: Edge, d: usize) -> Result<Vec<Walk>> {
    let class = w.multiplicity(e);
    if class == 0 {
        (0..=d).map(|k| extend_walk(w, n, e, d, 0, k)).collect()
    } else {
        Ok(vec![extend_walk(w, n, e, d, class, 0)?])
    }
}
