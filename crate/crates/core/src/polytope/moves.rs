use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::{Edge, SepPoint};
use crate::rational::{one, Rational};

/// Splits the 1-edge `e` by a fresh node `n`: `e` drops to zero and the two
/// new edges `(e.lo, n)` and `(n, e.hi)` carry weight 1.
pub fn bb_move(x: &SepPoint, e: Edge) -> Result<SepPoint> {
    insert_node(x, e.lo(), e.hi())
}

fn insert_node(x: &SepPoint, a: usize, b: usize) -> Result<SepPoint> {
    let e = Edge::try_new(a, b)?;
    if !x.weight(e).is_one() {
        return Err(Error::NotOneEdge(e));
    }
    let w = x.node_count();
    let weights = x
        .weights()
        .iter()
        .filter(|(f, _)| **f != e)
        .map(|(f, v)| (*f, v.clone()))
        .chain([(Edge::new(a, w), one()), (Edge::new(w, b), one())]);
    SepPoint::new(w + 1, weights)
}

/// Expands the 1-edge `(a, b)` into a 1-path with `d` internal nodes by `d`
/// successive moves, each on the edge between the newest node and `b`.
///
/// Returns the new point and the path `a, a_1, ..., a_d, b`; the inserted
/// nodes are numbered `n, n+1, ...` in path order.
pub fn expand_edge(x: &SepPoint, a: usize, b: usize, d: usize) -> Result<(SepPoint, Vec<usize>)> {
    let e = Edge::try_new(a, b)?;
    if !x.weight(e).is_one() {
        return Err(Error::NotOneEdge(e));
    }
    let mut cur = x.clone();
    let mut path = vec![a];
    for _ in 0..d {
        let last = *path.last().unwrap();
        let fresh = cur.node_count();
        cur = insert_node(&cur, last, b)?;
        path.push(fresh);
    }
    path.push(b);
    Ok((cur, path))
}

/// Ancestor of a vertex plus the number of internal nodes each of its
/// 1-edges must be expanded by to recover the input (up to isomorphism).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AncestorDecomposition {
    pub ancestor: SepPoint,
    /// The ancestor's 1-edges, sorted.
    pub one_edges: Vec<Edge>,
    /// `counts[i]` internal nodes go on `one_edges[i]`.
    pub counts: Vec<usize>,
}

impl AncestorDecomposition {
    pub fn total_added(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Repeatedly removes the smallest-numbered degree-2 node, joining its two
/// 1-edges into one, until none is left (or only a triangle remains).
pub fn contract_to_ancestor(x: &SepPoint) -> Result<AncestorDecomposition> {
    let mut cur = x.clone();
    let mut absorbed: BTreeMap<Edge, usize> = cur.one_edges().into_iter().map(|e| (e, 0)).collect();
    while cur.node_count() > 3 {
        let Some(v) = (0..cur.node_count()).find(|&v| cur.degree(v) == 2) else {
            break;
        };
        let incident: Vec<(Edge, Rational)> = cur
            .weights()
            .iter()
            .filter(|(e, _)| e.contains(v))
            .map(|(e, w)| (*e, w.clone()))
            .collect();
        if incident.iter().any(|(_, w)| !w.is_one()) {
            return Err(Error::InvalidPoint(format!(
                "degree-2 node {v} is not internal to a 1-path"
            )));
        }
        let (u, w) = (incident[0].0.other(v), incident[1].0.other(v));
        let joined = Edge::new(u, w);
        if cur.weights().contains_key(&joined) {
            return Err(Error::InvalidPoint(format!(
                "contracting node {v} would duplicate edge {joined}"
            )));
        }
        let count = absorbed[&incident[0].0] + absorbed[&incident[1].0] + 1;
        let shift = |t: usize| if t > v { t - 1 } else { t };
        let relabel = |e: Edge| Edge::new(shift(e.lo()), shift(e.hi()));
        let weights: Vec<(Edge, Rational)> = cur
            .weights()
            .iter()
            .filter(|(e, _)| !e.contains(v))
            .map(|(e, w)| (relabel(*e), w.clone()))
            .chain([(relabel(joined), one())])
            .collect();
        absorbed = absorbed
            .into_iter()
            .filter(|(e, _)| !e.contains(v))
            .map(|(e, c)| (relabel(e), c))
            .chain([(relabel(joined), count)])
            .collect();
        cur = SepPoint::new(cur.node_count() - 1, weights)?;
    }
    let one_edges = cur.one_edges();
    let counts = one_edges.iter().map(|e| absorbed[e]).collect();
    Ok(AncestorDecomposition {
        ancestor: cur,
        one_edges,
        counts,
    })
}

/// Expands each listed 1-edge of `ancestor` by its count, in order.
pub fn expand(ancestor: &SepPoint, one_edges: &[Edge], counts: &[usize]) -> Result<SepPoint> {
    assert_eq!(one_edges.len(), counts.len());
    let mut cur = ancestor.clone();
    for (e, &d) in one_edges.iter().zip(counts) {
        cur = expand_edge(&cur, e.lo(), e.hi(), d)?.0;
    }
    Ok(cur)
}
