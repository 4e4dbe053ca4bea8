use num_traits::One;

use super::simplex::{simplex_solve, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};
use crate::graph::{complete_edges, CostMatrix, Edge, SepPoint};
use crate::rational::Rational;

pub const MAX_FULL_NODES: usize = 8;

/// Optimum of the tour formulation over all metrics on `K_n`, with an optimal
/// metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullSolution {
    pub value: Rational,
    pub costs: CostMatrix,
}

/// Solves the model with every triangle inequality and every tour row
/// materialized, through its dual: maximize `Σ μ_t` subject to, for each edge
/// `ij`, `Σ_k (−λ_ijk + λ_ikj + λ_jki) + Σ_t t_ij μ_t <= x_ij`. The optimal
/// metric is read off the row duals.
pub fn solve_opt_plus_full(x: &SepPoint) -> Result<FullSolution> {
    let n = x.node_count();
    if n > MAX_FULL_NODES {
        return Err(Error::TooLarge {
            what: "n for the full tour model",
            got: n,
            limit: MAX_FULL_NODES,
        });
    }
    let edges = complete_edges(n);
    let row = |e: Edge| edges.binary_search(&e).unwrap();
    let mut lp = LinearProgram::new(Sense::Maximize, Vec::new());
    for e in &edges {
        lp.add_constraint(Vec::new(), Relation::Le, x.weight(*e));
    }
    let one = Rational::one();
    // λ with pair {i, j} and third node k: the inequality c_ik + c_jk >= c_ij.
    for e in &edges {
        for k in (0..n).filter(|k| !e.contains(*k)) {
            lp.add_column(
                Rational::from_integer(0.into()),
                vec![
                    (row(*e), -one.clone()),
                    (row(Edge::new(e.lo(), k)), one.clone()),
                    (row(Edge::new(e.hi(), k)), one.clone()),
                ],
            );
        }
    }
    for order in tours(n) {
        let column = (0..n)
            .map(|i| (row(Edge::new(order[i], order[(i + 1) % n])), one.clone()))
            .collect();
        lp.add_column(one.clone(), column);
    }
    let sol = simplex_solve(&lp)?;
    let costs = CostMatrix::from_fn(n, |e| sol.duals[row(e)].clone());
    Ok(FullSolution {
        value: sol.value,
        costs,
    })
}

/// Tours on `K_n` as node orders starting at 0, one per undirected cycle.
pub fn tours(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    permutations(&mut rest, 0, &mut |p| {
        if p[0] < p[p.len() - 1] {
            let mut order = vec![0];
            order.extend_from_slice(p);
            out.push(order);
        }
    });
    out.sort();
    out
}

fn permutations(a: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permutations(a, k + 1, f);
        a.swap(k, i);
    }
}
