use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::simplex::{simplex_solve, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};
use crate::graph::{support_graph, Edge, SepPoint, UnionFind, WeightedGraph};
use crate::rational::Rational;
use crate::walks::{is_valid_walk, lift_walk, min_cost_walk, Walk, WalkViolation};

/// Nonnegative weights on walks of a support graph; zero entries are not kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualAssignment {
    weights: BTreeMap<Walk, Rational>,
}

impl DualAssignment {
    pub fn new(entries: impl IntoIterator<Item = (Walk, Rational)>) -> Self {
        let mut a = DualAssignment::default();
        for (w, v) in entries {
            a.add(w, v);
        }
        a
    }

    pub fn add(&mut self, w: Walk, v: Rational) {
        if v.is_zero() {
            return;
        }
        let slot = self.weights.entry(w).or_insert_with(Rational::zero);
        *slot += v;
    }

    pub fn get(&self, w: &Walk) -> Rational {
        self.weights.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Walk, &Rational)> {
        self.weights.iter()
    }

    pub fn walks(&self) -> impl Iterator<Item = &Walk> {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Objective `Σ μ_w`.
    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Left-hand side `Σ w_e μ_w` of the constraint for edge `e`.
    pub fn load(&self, e: Edge) -> Rational {
        self.weights
            .iter()
            .map(|(w, v)| v * Rational::from_integer(w.multiplicity(e).into()))
            .sum()
    }

    pub fn scaled(&self, factor: &Rational) -> DualAssignment {
        DualAssignment::new(self.weights.iter().map(|(w, v)| (w.clone(), v * factor)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DualViolation {
    #[error("walk {index} is invalid: {violation}")]
    InvalidWalk { index: usize, violation: WalkViolation },
    #[error("walk {index} has negative weight")]
    Negative { index: usize },
    #[error("edge {edge} is overloaded by {excess}")]
    Overloaded { edge: Edge, excess: Rational },
}

/// Checks `μ >= 0`, that every walk lives on `G_x`, and `Σ w_e μ_w <= x_e` on
/// every support edge.
pub fn verify_dual_feasible(x: &SepPoint, mu: &DualAssignment) -> Result<(), DualViolation> {
    let g = support_graph(x);
    for (index, (w, v)) in mu.iter().enumerate() {
        if let Err(violation) = is_valid_walk(&g, w) {
            return Err(DualViolation::InvalidWalk { index, violation });
        }
        if v.is_negative() {
            return Err(DualViolation::Negative { index });
        }
    }
    for (e, xe) in x.weights() {
        let load = mu.load(*e);
        if load > *xe {
            return Err(DualViolation::Overloaded {
                edge: *e,
                excess: load - xe,
            });
        }
    }
    Ok(())
}

/// Carries `μ` from `x` to the vertex where the 1-edge `e` is expanded by `d`
/// nodes: class-0 walks split their weight evenly over `d + 1` excursion walks,
/// the others keep it.
pub fn lift_dual_assignment(
    mu: &DualAssignment,
    x: &SepPoint,
    e: Edge,
    d: usize,
) -> Result<DualAssignment> {
    if !x.weight(e).is_one() {
        return Err(Error::NotOneEdge(e));
    }
    let mut out = DualAssignment::default();
    for (w, v) in mu.iter() {
        let lifted = lift_walk(w, x.node_count(), e, d)?;
        let share = v / Rational::from_integer(lifted.len().into());
        for l in lifted {
            out.add(l, share.clone());
        }
    }
    Ok(out)
}

/// Optimum of the walk formulation: `value = min c·x` over costs with every
/// walk costing at least 1, which equals `max Σ μ_w` by duality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opt2Solution {
    pub value: Rational,
    /// Optimal costs on the support edges.
    pub costs: WeightedGraph,
    pub mu: DualAssignment,
    /// Walk rows generated after the initial set.
    pub rounds: usize,
    pub rows: usize,
}

pub fn solve_opt2(x: &SepPoint) -> Result<Opt2Solution> {
    solve_opt2_from(x, &[])
}

/// Row generation started from `initial` (invalid walks are skipped) plus a
/// doubled spanning tree.
///
/// Each round solves the restricted problem through its dual, `max Σ μ_w` over
/// the current walks subject to `Σ w_e μ_w <= x_e`; the row duals of that model
/// are the costs `c`. The cheapest walk under `c` is added while it costs less
/// than 1.
pub fn solve_opt2_from(x: &SepPoint, initial: &[Walk]) -> Result<Opt2Solution> {
    let g = support_graph(x);
    if let Some(v) = g.unreachable_from_zero() {
        return Err(Error::Disconnected(v));
    }
    let edges = g.edge_list();
    let mut walks: Vec<Walk> = Vec::new();
    let mut seen: BTreeSet<Walk> = BTreeSet::new();
    for w in initial.iter().cloned().chain([doubled_tree(&g)?]) {
        if is_valid_walk(&g, &w).is_ok() && seen.insert(w.clone()) {
            walks.push(w);
        }
    }
    let mut rounds = 0;
    loop {
        let mut lp = LinearProgram::new(Sense::Maximize, Vec::new());
        for e in &edges {
            lp.add_constraint(Vec::new(), Relation::Le, x.weight(*e));
        }
        for w in &walks {
            let column = edges
                .iter()
                .enumerate()
                .filter(|(_, e)| w.multiplicity(**e) > 0)
                .map(|(i, e)| (i, Rational::from_integer(w.multiplicity(*e).into())))
                .collect();
            lp.add_column(Rational::one(), column);
        }
        let sol = simplex_solve(&lp)?;
        let costs = g.relabel_edges(sol.duals.iter().cloned());
        let (walk, cost) = min_cost_walk(&costs)?;
        if cost >= Rational::one() {
            let mu = DualAssignment::new(
                walks
                    .iter()
                    .zip(&sol.primal)
                    .filter(|(_, v)| v.is_positive())
                    .map(|(w, v)| (w.clone(), v.clone())),
            );
            let primal_value: Rational = x.weights().iter().map(|(e, w)| costs.label(*e).unwrap() * w).sum();
            if primal_value != sol.value || mu.total() != sol.value {
                return Err(Error::Certification("walk formulation duality gap".into()));
            }
            return Ok(Opt2Solution {
                value: sol.value,
                costs,
                mu,
                rounds,
                rows: walks.len(),
            });
        }
        if !seen.insert(walk.clone()) {
            return Err(Error::RowGenerationStalled);
        }
        walks.push(walk);
        rounds += 1;
    }
}

/// Breadth-first spanning tree of `g` from node 0 with every edge doubled.
fn doubled_tree(g: &WeightedGraph) -> Result<Walk> {
    let mut uf = UnionFind::new(g.node_count());
    let tree: Vec<(Edge, u8)> = g
        .edge_list()
        .into_iter()
        .filter(|e| uf.union(e.lo(), e.hi()))
        .map(|e| (e, 2))
        .collect();
    Walk::new(tree)
}
