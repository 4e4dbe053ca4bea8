use num_traits::Signed;

use crate::error::{Error, Result};
use crate::graph::{CostMatrix, Edge, WeightedGraph};
use crate::rational::Rational;

/// Shortest-path costs on `K_n` (Floyd–Warshall), keeping the graph's own
/// costs on its edges.
///
/// Fails if a cost is negative, the graph is disconnected, or some edge is
/// longer than a path between its endpoints (the input is then not metric on
/// its own edges, and the completion would not be metric either).
pub fn metric_completion(g: &WeightedGraph) -> Result<CostMatrix> {
    let n = g.node_count();
    if let Some((e, _)) = g.edges().iter().find(|(_, c)| c.is_negative()) {
        return Err(Error::NotMetric(*e));
    }
    if let Some(v) = g.unreachable_from_zero() {
        return Err(Error::Disconnected(v));
    }
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(Rational::from_integer(0.into()));
    }
    for (e, c) in g.edges() {
        dist[e.lo()][e.hi()] = Some(c.clone());
        dist[e.hi()][e.lo()] = Some(c.clone());
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k].clone() else { continue };
            for j in 0..n {
                if let Some(kj) = &dist[k][j] {
                    let via = &ik + kj;
                    if dist[i][j].as_ref().is_none_or(|d| via < *d) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
    }
    for (e, c) in g.edges() {
        if dist[e.lo()][e.hi()].as_ref() != Some(c) {
            return Err(Error::NotMetric(*e));
        }
    }
    Ok(CostMatrix::from_fn(n, |e: Edge| {
        dist[e.lo()][e.hi()].clone().expect("connected")
    }))
}
