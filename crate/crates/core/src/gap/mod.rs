//! Gap bounds for all successors of a vertex, from one optimal walk assignment.

mod certificate;

use num_traits::{One, Zero};

use crate::canon::canonical_labeling;
use crate::error::{Error, Result};
use crate::graph::{support_graph, Edge, SepPoint};
use crate::lp::{lift_dual_assignment, solve_opt2_from, DualAssignment, Opt2Solution};
use crate::polytope::bb_move;
use crate::rational::Rational;
use crate::walks::Walk;

pub use certificate::{
    verify_certificate, CertificateError, CertifiedWalk, GapBoundCertificate, WeightedEdge,
    CERTIFICATE_FORMAT, CERTIFICATE_SCOPE,
};

pub const DEFAULT_MAX_ITER: usize = 10;

/// `C(x, e) = 2 Σ_{w_e = 0} μ_w + Σ_{w_e = 1} μ_w + 2 Σ_{w_e = 2} μ_w`.
pub fn compute_c(x: &SepPoint, mu: &DualAssignment, e: Edge) -> Result<Rational> {
    if !x.weight(e).is_one() {
        return Err(Error::NotOneEdge(e));
    }
    Ok(c_formula(mu.iter(), e))
}

pub(crate) fn c_formula<'a>(walks: impl Iterator<Item = (&'a Walk, &'a Rational)>, e: Edge) -> Rational {
    let two = Rational::from_integer(2.into());
    walks
        .map(|(w, v)| if w.multiplicity(e) == 1 { v.clone() } else { v * &two })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapBoundResult {
    pub solution: Opt2Solution,
    pub gap_plus: Rational,
    /// `C(x, e)` for each 1-edge, in edge order.
    pub constants: Vec<(Edge, Rational)>,
    pub c_star: Rational,
    pub bound: Rational,
}

pub fn gb(x: &SepPoint) -> Result<(GapBoundResult, GapBoundCertificate)> {
    gb_from(x, &[])
}

/// [`gb`] with row generation seeded by `initial`.
pub fn gb_from(x: &SepPoint, initial: &[Walk]) -> Result<(GapBoundResult, GapBoundCertificate)> {
    let one_edges = x.one_edges();
    if one_edges.is_empty() {
        return Err(Error::NoOneEdges);
    }
    let solution = solve_opt2_from(x, initial)?;
    let constants = one_edges
        .into_iter()
        .map(|e| Ok((e, compute_c(x, &solution.mu, e)?)))
        .collect::<Result<Vec<_>>>()?;
    // A single C below 1 is harmless: normalizing by C* >= 1 keeps every
    // constraint off the expanded paths feasible.
    let (star_edge, c_star) = constants.iter().max_by(|a, b| a.1.cmp(&b.1)).unwrap().clone();
    if c_star < Rational::one() {
        return Err(Error::ConstantBelowOne {
            edge: star_edge,
            value: c_star.to_string(),
        });
    }
    let gap_plus = solution.value.recip();
    let bound = &c_star * &gap_plus;
    let result = GapBoundResult {
        solution,
        gap_plus,
        constants,
        c_star,
        bound,
    };
    let cert = GapBoundCertificate::from_result(x, &result);
    Ok((result, cert))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbeOptions {
    /// Seed each solve with the previous optimal walks carried over the move.
    pub warm_start: bool,
}

impl Default for GbeOptions {
    fn default() -> Self {
        GbeOptions { warm_start: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbeOutcome {
    /// Smallest GB value met along the way.
    pub bound: Rational,
    /// Additional GB runs after the first.
    pub iterations: usize,
    /// 1-edge split at each iteration.
    pub moves: Vec<Edge>,
    /// One certificate per GB run, the first for the input vertex.
    pub certificates: Vec<GapBoundCertificate>,
    /// Index into `certificates` of the run achieving `bound`.
    pub best: usize,
}

pub fn gbe(x: &SepPoint, alpha: &Rational, max_iter: usize) -> Result<GbeOutcome> {
    gbe_with(x, alpha, max_iter, GbeOptions::default())
}

/// Runs GB, then keeps splitting the 1-edge with the largest `C` and rerunning
/// GB on the successor while the best bound exceeds `alpha` and fewer than
/// `max_iter` extra runs were made.
pub fn gbe_with(x: &SepPoint, alpha: &Rational, max_iter: usize, opts: GbeOptions) -> Result<GbeOutcome> {
    let (mut result, cert) = gb(x)?;
    let mut outcome = GbeOutcome {
        bound: result.bound.clone(),
        iterations: 0,
        moves: Vec::new(),
        certificates: vec![cert],
        best: 0,
    };
    let mut current = x.clone();
    while outcome.bound > *alpha && outcome.iterations < max_iter {
        outcome.iterations += 1;
        let e = select_edge(&current, &result.constants);
        let next = bb_move(&current, e)?;
        let initial: Vec<Walk> = if opts.warm_start {
            lift_dual_assignment(&result.solution.mu, &current, e, 1)?
                .walks()
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        let (r, cert) = gb_from(&next, &initial)?;
        if r.bound < outcome.bound {
            outcome.bound = r.bound.clone();
            outcome.best = outcome.certificates.len();
        }
        outcome.certificates.push(cert);
        outcome.moves.push(e);
        result = r;
        current = next;
    }
    Ok(outcome)
}

/// Largest `C`; ties go to the edge that comes first under the canonical
/// labeling of the support graph.
fn select_edge(x: &SepPoint, constants: &[(Edge, Rational)]) -> Edge {
    let (_, perm) = canonical_labeling(&support_graph(x));
    let canon = |e: Edge| Edge::new(perm[e.lo()], perm[e.hi()]);
    constants
        .iter()
        .max_by(|(e1, c1), (e2, c2)| c1.cmp(c2).then_with(|| canon(*e2).cmp(&canon(*e1))))
        .map(|(e, _)| *e)
        .expect("at least one 1-edge")
}

/// `1 / value` of the walk formulation.
pub fn gap_plus(x: &SepPoint) -> Result<Rational> {
    let s = crate::lp::solve_opt2(x)?;
    if s.value.is_zero() {
        return Err(Error::Certification("zero optimum".into()));
    }
    Ok(s.value.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    #[test]
    fn single_walk_constants() {
        let x = fixtures::prism();
        let e = Edge::new(0, 3);
        let once = Walk::tour(&[0, 1, 2, 5, 4, 3]).unwrap();
        let mu = DualAssignment::new([(once.clone(), frac(3, 4))]);
        assert_eq!(compute_c(&x, &mu, e).unwrap(), frac(3, 4));
        let zero = Walk::tour(&[1, 2, 5, 4]).unwrap();
        let twice = Walk::new([(e, 2)]).unwrap();
        let mu = DualAssignment::new([(zero, frac(1, 3)), (twice, frac(1, 5))]);
        assert_eq!(compute_c(&x, &mu, e).unwrap(), frac(2, 3) + frac(2, 5));
        assert_eq!(compute_c(&x, &mu, Edge::new(0, 1)), Err(Error::NotOneEdge(Edge::new(0, 1))));
    }

    #[test]
    fn prism_is_four_thirds() {
        let (r, cert) = gb(&fixtures::prism()).unwrap();
        assert_eq!(r.bound, frac(4, 3));
        assert_eq!(r.gap_plus, frac(10, 9));
        assert_eq!(r.c_star, frac(6, 5));
        assert!(r.constants.iter().all(|(_, c)| *c == frac(6, 5)));
        assert!(verify_certificate(&cert).is_ok());
        let out = gbe(&fixtures::prism(), &frac(4, 3), 10).unwrap();
        assert_eq!((out.bound, out.iterations), (frac(4, 3), 0));
    }

    #[test]
    fn tour_bound() {
        let x = SepPoint::tour(&[0, 1, 2, 3, 4, 5]).unwrap();
        let (r, _) = gb(&x).unwrap();
        assert_eq!(r.gap_plus, int(1));
        assert!(r.bound >= int(1));
        assert_eq!(r.bound, r.c_star);
    }

    #[test]
    fn zero_iterations_is_gb() {
        for x in fixtures::order4() {
            let out = gbe(&x, &int(1), 0).unwrap();
            assert_eq!(out.bound, gb(&x).unwrap().0.bound);
            assert_eq!(out.iterations, 0);
        }
    }
}
