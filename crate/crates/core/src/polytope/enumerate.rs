//! Vertex enumeration of the subtour-elimination polytope for tiny `n` by the
//! double description method on the homogenized cone
//! `{(x, t) : x >= 0, t >= 0, x(δ(v)) = 2t, x_e <= t, x(δ(S)) >= 2t}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{complete_edges, support_graph, SepPoint};
use crate::par;
use crate::rational::Rational;

pub const MAX_ENUMERATION_NODES: usize = 6;

type Bits = u128;

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<i64>,
    zeros: Bits,
}

struct Row {
    coeffs: Vec<i64>,
    equality: bool,
}

/// All vertices of the polytope on `n` nodes, one per isomorphism class,
/// sorted by support size and then canonical form.
pub fn enumerate_sep_vertices(n: usize) -> Result<Vec<SepPoint>> {
    if n > MAX_ENUMERATION_NODES {
        return Err(Error::TooLarge {
            what: "n for the enumeration oracle",
            got: n,
            limit: MAX_ENUMERATION_NODES,
        });
    }
    if n < 3 {
        return Ok(Vec::new());
    }
    let edges = complete_edges(n);
    let m = edges.len();
    let dim = m + 1;
    let t = m;

    // Orthant rows 0..dim are satisfied by the initial unit rays.
    let mut rows: Vec<Row> = (0..dim)
        .map(|j| {
            let mut c = vec![0; dim];
            c[j] = 1;
            Row { coeffs: c, equality: false }
        })
        .collect();
    for v in 0..n {
        let mut c = vec![0; dim];
        for (k, e) in edges.iter().enumerate() {
            if e.contains(v) {
                c[k] = 1;
            }
        }
        c[t] = -2;
        rows.push(Row { coeffs: c, equality: true });
    }
    for k in 0..m {
        let mut c = vec![0; dim];
        c[k] = -1;
        c[t] = 1;
        rows.push(Row { coeffs: c, equality: false });
    }
    if n >= 6 {
        for mask in 0u32..(1 << (n - 1)) {
            let size = mask.count_ones() as usize;
            if size < 3 || size > n - 3 {
                continue;
            }
            let mut c = vec![0; dim];
            for (k, e) in edges.iter().enumerate() {
                if (mask >> e.lo() & 1) != (mask >> e.hi() & 1) {
                    c[k] = 1;
                }
            }
            c[t] = -2;
            rows.push(Row { coeffs: c, equality: false });
        }
    }
    assert!(rows.len() <= Bits::BITS as usize);

    let orthant: Bits = (1 << dim) - 1;
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let mut coords = vec![0; dim];
            coords[j] = 1;
            Ray {
                coords,
                zeros: orthant & !(1 << j),
            }
        })
        .collect();

    for (idx, row) in rows.iter().enumerate().skip(dim) {
        rays = add_constraint(rays, row, idx, dim);
    }

    let mut classes: BTreeMap<(usize, CanonicalForm), SepPoint> = BTreeMap::new();
    for r in rays {
        let scale = r.coords[t];
        debug_assert!(scale > 0);
        let x = SepPoint::new(
            n,
            edges.iter().enumerate().map(|(k, e)| {
                (*e, Rational::new(BigInt::from(r.coords[k]), BigInt::from(scale)))
            }),
        )?;
        let key = (x.edge_count(), canonical_form(&support_graph(&x)));
        classes.entry(key).or_insert(x);
    }
    Ok(classes.into_values().collect())
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn add_constraint(rays: Vec<Ray>, row: &Row, idx: usize, dim: usize) -> Vec<Ray> {
    let values: Vec<i64> = rays.iter().map(|r| dot(&row.coeffs, &r.coords)).collect();
    let bit: Bits = 1 << idx;
    let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > 0).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < 0).collect();

    let mut next: Vec<Ray> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        if values[i] == 0 {
            next.push(Ray {
                coords: r.coords.clone(),
                zeros: r.zeros | bit,
            });
        } else if values[i] > 0 && !row.equality {
            next.push(r.clone());
        }
    }

    // Two rays are adjacent iff no third ray is tight on every constraint
    // they are both tight on.
    let combined = par::flat_map(&pos, |&p| {
        let mut out = Vec::new();
        for &q in &neg {
            let common = rays[p].zeros & rays[q].zeros;
            if (common.count_ones() as usize) + 2 < dim {
                continue;
            }
            let blocked = rays
                .iter()
                .enumerate()
                .any(|(k, r)| k != p && k != q && r.zeros & common == common);
            if blocked {
                continue;
            }
            let (vp, vq) = (values[p], -values[q]);
            let mut coords: Vec<i64> = rays[p]
                .coords
                .iter()
                .zip(&rays[q].coords)
                .map(|(a, b)| vq * a + vp * b)
                .collect();
            let g = coords.iter().fold(0, |acc, &v| gcd(acc, v));
            if g > 1 {
                coords.iter_mut().for_each(|v| *v /= g);
            }
            out.push(Ray {
                coords,
                zeros: common | bit,
            });
        }
        out
    });
    next.extend(combined);
    next
}
