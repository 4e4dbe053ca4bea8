use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::feasibility::{check_sep_feasible, cut_value, Violation};
use crate::error::{Error, Result};
use crate::graph::SepPoint;
use crate::rational::int;

/// Largest `n` for which tight subtour constraints are enumerated directly.
pub const MAX_DIRECT_CHECK_NODES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCheckReport {
    pub feasible: bool,
    pub violated: Option<Violation>,
    /// Number of tight constraints (degrees, subtour cuts, bounds).
    pub tight_count: usize,
    pub tight_rank: usize,
    pub is_vertex: bool,
}

/// Extreme-point test: feasible and the tight constraints have rank `|E_n|`.
///
/// Bounds `x_e = 0` off the support each fix one coordinate, so the rank is
/// `|E_n| - |E_x|` plus the rank of the remaining tight rows restricted to the
/// support columns.
pub fn is_vertex(x: &SepPoint) -> Result<VertexCheckReport> {
    let n = x.node_count();
    if n > MAX_DIRECT_CHECK_NODES {
        return Err(Error::TooLarge {
            what: "dimension for direct vertex check",
            got: n,
            limit: MAX_DIRECT_CHECK_NODES,
        });
    }
    let mut report = check_sep_feasible(x);
    if !report.feasible {
        return Ok(report);
    }
    let support: Vec<_> = x.weights().keys().copied().collect();
    let full_dim = n * (n - 1) / 2;
    let zero_bounds = full_dim - support.len();

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for v in 0..n {
        rows.push(
            support
                .iter()
                .map(|e| BigInt::from(e.contains(v) as i32))
                .collect(),
        );
    }
    for (k, e) in support.iter().enumerate() {
        if x.weight(*e).is_one() {
            let mut r = vec![BigInt::zero(); support.len()];
            r[k] = BigInt::one();
            rows.push(r);
        }
    }
    let two = int(2);
    if n >= 6 {
        // Sets avoiding node n-1 represent each {S, V∖S} pair exactly once.
        for mask in 0u32..(1 << (n - 1)) {
            let size = mask.count_ones() as usize;
            if size < 3 || size > n - 3 {
                continue;
            }
            let in_set: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            if cut_value(x, &in_set) == two {
                rows.push(
                    support
                        .iter()
                        .map(|e| BigInt::from((in_set[e.lo()] != in_set[e.hi()]) as i32))
                        .collect(),
                );
            }
        }
    }
    report.tight_count = rows.len() + zero_bounds;
    report.tight_rank = zero_bounds + rank(rows);
    report.is_vertex = report.tight_rank == full_dim;
    Ok(report)
}

/// Row rank by fraction-free elimination; rows are reduced by their gcd after
/// each update so entries stay small.
pub(crate) fn rank(rows: Vec<Vec<BigInt>>) -> usize {
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for mut r in rows {
        for (pivot, b) in &basis {
            if r[*pivot].is_zero() {
                continue;
            }
            let (f, g) = (b[*pivot].clone(), r[*pivot].clone());
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri = &f * &*ri - &g * bi;
            }
            normalize(&mut r);
        }
        if let Some(p) = r.iter().position(|v| !v.is_zero()) {
            basis.push((p, r));
        }
    }
    basis.len()
}

fn normalize(r: &mut [BigInt]) {
    let g = r.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in r.iter_mut() {
            *v = &*v / &g;
        }
    }
}
