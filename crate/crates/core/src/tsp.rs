//! Exact TSP by the Held–Karp dynamic program, on integer-scaled costs.

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::CostMatrix;
use crate::rational::{common_denominator, Rational};

pub const MAX_TSP_NODES: usize = 18;

/// Optimal tour value and one optimal tour (node order starting at 0).
pub fn tsp_exact(c: &CostMatrix) -> Result<(Rational, Vec<usize>)> {
    let n = c.node_count();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::zero() } else { c.get(i, j).clone() }).collect())
        .collect();
    tsp_dense(&rows)
}

/// Same as [`tsp_exact`] for a dense symmetric matrix with zero diagonal.
pub(crate) fn tsp_dense(d: &[Vec<Rational>]) -> Result<(Rational, Vec<usize>)> {
    let n = d.len();
    if n > MAX_TSP_NODES {
        return Err(Error::TooLarge {
            what: "n for Held-Karp",
            got: n,
            limit: MAX_TSP_NODES,
        });
    }
    let scale = common_denominator(d.iter().flatten());
    let scaled: Vec<Vec<BigInt>> = d
        .iter()
        .map(|r| r.iter().map(|v| v.numer() * (&scale / v.denom())).collect())
        .collect();
    let max = scaled.iter().flatten().max().cloned().unwrap_or_default();
    let fits = max
        .to_i128()
        .is_some_and(|m| m.checked_mul(4 * (n as i128 + 1)).is_some());
    let (total, tour) = if fits {
        let small: Vec<Vec<i128>> = scaled
            .iter()
            .map(|r| r.iter().map(|v| v.to_i128().unwrap()).collect())
            .collect();
        let (t, tour) = held_karp(&small);
        (BigInt::from(t), tour)
    } else {
        held_karp(&scaled)
    };
    Ok((Rational::new(total, scale), tour))
}

/// Minimum-cost Hamiltonian cycle through all nodes of `d`. Ties resolve to the
/// smallest predecessor, so the result is deterministic.
pub(crate) fn held_karp<T>(d: &[Vec<T>]) -> (T, Vec<usize>)
where
    T: Clone + Ord + Zero + Add<Output = T>,
{
    let n = d.len();
    match n {
        0 | 1 => return (T::zero(), (0..n).collect()),
        2 => return (d[0][1].clone() + d[1][0].clone(), vec![0, 1]),
        _ => {}
    }
    let m = n - 1;
    let full = (1usize << m) - 1;
    let idx = |mask: usize, j: usize| mask * m + j;
    let mut cost: Vec<Option<T>> = vec![None; (full + 1) * m];
    let mut parent: Vec<u8> = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        cost[idx(1 << j, j)] = Some(d[0][j + 1].clone());
    }
    for mask in 1..=full {
        for j in 0..m {
            if mask >> j & 1 == 0 {
                continue;
            }
            let Some(base) = cost[idx(mask, j)].clone() else { continue };
            for k in 0..m {
                if mask >> k & 1 == 1 {
                    continue;
                }
                let next = mask | 1 << k;
                let cand = base.clone() + d[j + 1][k + 1].clone();
                let slot = &mut cost[idx(next, k)];
                if slot.as_ref().is_none_or(|cur| cand < *cur) {
                    *slot = Some(cand);
                    parent[idx(next, k)] = j as u8;
                }
            }
        }
    }
    let (best, last) = (0..m)
        .map(|j| (cost[idx(full, j)].clone().unwrap() + d[j + 1][0].clone(), j))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .unwrap();
    let mut tour = Vec::with_capacity(n);
    let (mut mask, mut j) = (full, last);
    loop {
        tour.push(j + 1);
        let p = parent[idx(mask, j)];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    tour.push(0);
    tour.reverse();
    (best, tour)
}
