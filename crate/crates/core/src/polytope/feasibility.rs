use num_traits::Zero;

use super::vertex::VertexCheckReport;
use crate::graph::{support_graph, SepPoint, WeightedGraph};
use crate::rational::{int, Rational};

/// Node set `S` with its cut value `x(δ(S))`. `S` and its complement describe
/// the same constraint; we keep the smaller side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtourCut {
    pub set: Vec<usize>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Degree { node: usize, value: Rational },
    Subtour(SubtourCut),
}

/// Degree equalities plus a global minimum cut of at least 2.
///
/// Bounds `0 <= x_e <= 1` hold by construction of [`SepPoint`]. Once degrees
/// and bounds hold, every cut with `|S| <= 2` is at least 2, so the minimum
/// cut certifies all subtour constraints at once.
pub fn check_sep_feasible(x: &SepPoint) -> VertexCheckReport {
    let two = int(2);
    let infeasible = |v: Violation| VertexCheckReport {
        feasible: false,
        violated: Some(v),
        tight_count: 0,
        tight_rank: 0,
        is_vertex: false,
    };
    for v in 0..x.node_count() {
        let d = x.weighted_degree(v);
        if d != two {
            return infeasible(Violation::Degree { node: v, value: d });
        }
    }
    if x.node_count() >= 2 {
        let cut = min_cut(&support_graph(x));
        if cut.value < two {
            return infeasible(Violation::Subtour(cut));
        }
    }
    VertexCheckReport {
        feasible: true,
        violated: None,
        tight_count: 0,
        tight_rank: 0,
        is_vertex: false,
    }
}

/// Stoer–Wagner global minimum cut with exact weights. Requires `n >= 2`.
pub fn min_cut(g: &WeightedGraph) -> SubtourCut {
    let n = g.node_count();
    assert!(n >= 2, "minimum cut needs two nodes");
    let mut w = vec![vec![Rational::zero(); n]; n];
    for (e, c) in g.edges() {
        w[e.lo()][e.hi()] = c.clone();
        w[e.hi()][e.lo()] = c.clone();
    }
    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<SubtourCut> = None;

    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut key = vec![Rational::zero(); n];
        let mut order = Vec::with_capacity(active.len());
        for _ in 0..active.len() {
            // Maximum adjacency; ties go to the smallest node.
            let next = active
                .iter()
                .copied()
                .filter(|&v| !added[v])
                .fold(None::<usize>, |acc, v| match acc {
                    Some(a) if key[a] >= key[v] => Some(a),
                    _ => Some(v),
                })
                .unwrap();
            added[next] = true;
            order.push(next);
            for &u in &active {
                if !added[u] {
                    key[u] = &key[u] + &w[next][u];
                }
            }
        }
        let last = order[order.len() - 1];
        let prev = order[order.len() - 2];
        let phase_value = key[last].clone();
        if best.as_ref().is_none_or(|b| phase_value < b.value) {
            best = Some(SubtourCut {
                set: groups[last].clone(),
                value: phase_value,
            });
        }
        // Merge `last` into `prev`.
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &u in &active {
            if u != prev && u != last {
                let merged = &w[prev][u] + &w[last][u];
                w[prev][u] = merged.clone();
                w[u][prev] = merged;
            }
        }
        active.retain(|&v| v != last);
    }

    let mut cut = best.unwrap();
    let mut set = cut.set;
    set.sort_unstable();
    if 2 * set.len() > n || (2 * set.len() == n && !set.contains(&0)) {
        set = (0..n).filter(|v| !set.contains(v)).collect();
    }
    cut.set = set;
    cut
}

/// `x(δ(S))` by direct summation.
pub(crate) fn cut_value(x: &SepPoint, in_set: &[bool]) -> Rational {
    x.weights()
        .iter()
        .filter(|(e, _)| in_set[e.lo()] != in_set[e.hi()])
        .map(|(_, w)| w.clone())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Edge;
    use crate::rational::frac;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_min_cut(g: &WeightedGraph) -> Rational {
        let n = g.node_count();
        (1..(1u32 << (n - 1)))
            .map(|mask| {
                g.edges()
                    .iter()
                    .filter(|(e, _)| (mask >> e.lo() & 1) != (mask >> e.hi() & 1))
                    .map(|(_, w)| w.clone())
                    .sum::<Rational>()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn tours_and_prism_are_feasible() {
        assert!(check_sep_feasible(&SepPoint::tour(&[0, 3, 1, 4, 2, 5]).unwrap()).feasible);
        assert!(check_sep_feasible(&fixtures::prism()).feasible);
        for x in fixtures::order4() {
            assert!(check_sep_feasible(&x).feasible);
        }
    }

    #[test]
    fn disjoint_triangles_violate_subtour() {
        let x = SepPoint::new(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
                .map(|(i, j)| (Edge::new(i, j), crate::rational::one())),
        )
        .unwrap();
        let report = check_sep_feasible(&x);
        assert!(!report.feasible);
        match report.violated {
            Some(Violation::Subtour(cut)) => {
                assert_eq!(cut.set, vec![0, 1, 2]);
                assert_eq!(cut.value, int(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degree_violation_names_the_node() {
        let x = SepPoint::new(3, [(Edge::new(0, 1), frac(1, 2))]).unwrap();
        assert!(matches!(
            check_sep_feasible(&x).violated,
            Some(Violation::Degree { node: 0, .. })
        ));
    }

    #[test]
    fn stoer_wagner_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..9);
            let edges = crate::graph::complete_edges(n)
                .into_iter()
                .filter_map(|e| {
                    rng.gen_bool(0.6)
                        .then(|| (e, frac(rng.gen_range(0..7), rng.gen_range(1..5))))
                })
                .collect::<Vec<_>>();
            let g = WeightedGraph::new(n, edges).unwrap();
            let cut = min_cut(&g);
            assert_eq!(cut.value, brute_min_cut(&g));
            let mut side = vec![false; n];
            for &v in &cut.set {
                side[v] = true;
            }
            let direct: Rational = g
                .edges()
                .iter()
                .filter(|(e, _)| side[e.lo()] != side[e.hi()])
                .map(|(_, w)| w.clone())
                .sum();
            assert_eq!(direct, cut.value);
        }
    }
}
