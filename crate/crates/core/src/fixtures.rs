//! Ancestor fixtures shipped with the crate.
//!
//! The five order-4 ancestors use nodes `a..h`, mapped
//! to `0..7`. Every fixture must pass [`crate::polytope::is_vertex`], which
//! `validate_all` and the test suite enforce.

use crate::error::{Error, Result};
use crate::graph::{Edge, SepPoint};
use crate::polytope::is_vertex;
use crate::rational::{frac, one};

fn point(n: usize, ones: &[(usize, usize)], halves: &[(usize, usize)]) -> SepPoint {
    let edges = ones
        .iter()
        .map(|&(i, j)| (Edge::new(i, j), one()))
        .chain(halves.iter().map(|&(i, j)| (Edge::new(i, j), frac(1, 2))));
    SepPoint::new(n, edges).expect("fixture edges are well formed")
}

fn cycle(nodes: &[usize]) -> Vec<(usize, usize)> {
    (0..nodes.len())
        .map(|i| (nodes[i], nodes[(i + 1) % nodes.len()]))
        .collect()
}

/// The unique order-3 ancestor: two half-weight triangles joined by three 1-edges.
pub fn prism() -> SepPoint {
    point(6, &[(0, 3), (1, 4), (2, 5)], &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;
const F: usize = 5;
const G: usize = 6;
const H: usize = 7;

/// Seven nodes; `g` has degree four.
pub fn order4_n7() -> SepPoint {
    point(7, &[(A, B), (C, D), (E, F)], &cycle(&[A, G, E, B, D, F, G, C]))
}

pub fn order4_cube_cycle() -> SepPoint {
    point(
        8,
        &[(A, B), (C, D), (E, H), (F, G)],
        &cycle(&[A, E, F, B, C, G, H, D]),
    )
}

pub fn order4_triangle_pentagon() -> SepPoint {
    let mut halves = cycle(&[A, E, D]);
    halves.extend(cycle(&[F, B, C, G, H]));
    point(8, &[(A, B), (C, D), (E, H), (F, G)], &halves)
}

pub fn order4_crossed() -> SepPoint {
    point(
        8,
        &[(A, D), (B, C), (E, H), (F, G)],
        &cycle(&[A, E, G, C, D, H, F, B]),
    )
}

pub fn order4_twisted() -> SepPoint {
    point(
        8,
        &[(A, B), (C, D), (E, H), (F, G)],
        &cycle(&[A, E, G, C, B, F, H, D]),
    )
}

pub fn order4() -> Vec<SepPoint> {
    vec![
        order4_n7(),
        order4_cube_cycle(),
        order4_triangle_pentagon(),
        order4_crossed(),
        order4_twisted(),
    ]
}

/// The prism followed by the five order-4 ancestors.
pub fn all_ancestors() -> Vec<SepPoint> {
    let mut v = vec![prism()];
    v.extend(order4());
    v
}

/// Fails if any shipped fixture is not a vertex of its polytope.
pub fn validate_all() -> Result<()> {
    for (i, x) in all_ancestors().into_iter().enumerate() {
        let report = is_vertex(&x)?;
        if !report.is_vertex {
            return Err(Error::InvalidPoint(format!(
                "fixture #{i} is not a vertex: {report:?}"
            )));
        }
    }
    Ok(())
}
