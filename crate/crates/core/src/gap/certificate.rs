//! Self-contained records of a GB run, checkable without any LP solve.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{c_formula, GapBoundResult};
use crate::error::{Error, Result};
use crate::graph::{support_graph, Edge, SepPoint};
use crate::lp::{verify_dual_feasible, DualAssignment, DualViolation};
use crate::polytope::check_sep_feasible;
use crate::rational::{serde_str, Rational};
use crate::walks::{is_valid_walk, min_cost_walk, Walk, WalkViolation};

pub const CERTIFICATE_FORMAT: u32 = 1;
pub const CERTIFICATE_SCOPE: &str = "all successors of the ancestor of the point";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub edge: Edge,
    #[serde(with = "serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedWalk {
    pub walk: Walk,
    #[serde(with = "serde_str")]
    pub mu: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapBoundCertificate {
    pub format_version: u32,
    pub scope: String,
    pub n: usize,
    pub point: Vec<WeightedEdge>,
    pub costs: Vec<WeightedEdge>,
    pub walks: Vec<CertifiedWalk>,
    #[serde(with = "serde_str")]
    pub value: Rational,
    #[serde(with = "serde_str")]
    pub gap_plus: Rational,
    pub constants: Vec<WeightedEdge>,
    #[serde(with = "serde_str")]
    pub c_star: Rational,
    #[serde(with = "serde_str")]
    pub bound: Rational,
    /// SHA-256 of the JSON encoding with this field empty.
    pub digest: String,
}

fn weighted(it: impl IntoIterator<Item = (Edge, Rational)>) -> Vec<WeightedEdge> {
    it.into_iter().map(|(edge, value)| WeightedEdge { edge, value }).collect()
}

impl GapBoundCertificate {
    pub fn from_result(x: &SepPoint, r: &GapBoundResult) -> Self {
        GapBoundCertificate {
            format_version: CERTIFICATE_FORMAT,
            scope: CERTIFICATE_SCOPE.to_string(),
            n: x.node_count(),
            point: weighted(x.weights().iter().map(|(e, w)| (*e, w.clone()))),
            costs: weighted(r.solution.costs.edges().iter().cloned()),
            walks: r
                .solution
                .mu
                .iter()
                .map(|(w, v)| CertifiedWalk {
                    walk: w.clone(),
                    mu: v.clone(),
                })
                .collect(),
            value: r.solution.value.clone(),
            gap_plus: r.gap_plus.clone(),
            constants: weighted(r.constants.iter().cloned()),
            c_star: r.c_star.clone(),
            bound: r.bound.clone(),
            digest: String::new(),
        }
        .sealed()
    }

    pub fn compute_digest(&self) -> String {
        let mut body = self.clone();
        body.digest.clear();
        let bytes = serde_json::to_vec(&body).expect("certificate serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Recomputes the digest for the current contents.
    pub fn sealed(mut self) -> Self {
        self.digest = self.compute_digest();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn point(&self) -> Result<SepPoint> {
        SepPoint::new(self.n, self.point.iter().map(|w| (w.edge, w.value.clone())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("unknown scope {0:?}")]
    Scope(String),
    #[error("digest mismatch: stored {stored}, computed {computed}")]
    Digest { stored: String, computed: String },
    #[error("point is not valid: {0}")]
    Point(String),
    #[error("walk {index}: {violation}")]
    Walk { index: usize, violation: WalkViolation },
    #[error("walk {index} has nonpositive weight {mu}")]
    NonPositiveWeight { index: usize, mu: Rational },
    #[error("dual infeasible: {0}")]
    Dual(DualViolation),
    #[error("stated value {stated} but weights sum to {computed}")]
    Objective { stated: Rational, computed: Rational },
    #[error("costs must cover exactly the support edges")]
    CostSupport,
    #[error("negative cost on {0}")]
    NegativeCost(Edge),
    #[error("c·x = {computed}, stated value {stated}")]
    PrimalValue { stated: Rational, computed: Rational },
    #[error("walk {index} costs {cost}, not 1")]
    WalkCost { index: usize, cost: Rational },
    #[error("costs infeasible: a walk costs {0} < 1")]
    PrimalInfeasible(Rational),
    #[error("constants must be listed for exactly the 1-edges")]
    ConstantSet,
    #[error("C({edge}) stated {stated}, computed {computed}")]
    Constant { edge: Edge, stated: Rational, computed: Rational },
    #[error("C* = C({edge}) = {value} is below 1")]
    ConstantBelowOne { edge: Edge, value: Rational },
    #[error("C* stated {stated}, computed {computed}")]
    CStar { stated: Rational, computed: Rational },
    #[error("gap_plus stated {stated}, computed {computed}")]
    GapPlus { stated: Rational, computed: Rational },
    #[error("bound stated {stated}, computed {computed}")]
    Bound { stated: Rational, computed: Rational },
}

/// Re-derives every claim of `cert` from its own contents. Returns the first
/// failing check.
///
/// The costs are primal feasible (every walk costs at least 1, checked by an
/// exact cheapest-walk search) and the weights are dual feasible with the same
/// objective, so the stated value is the exact optimum by weak duality.
pub fn verify_certificate(cert: &GapBoundCertificate) -> Result<(), CertificateError> {
    if cert.format_version != CERTIFICATE_FORMAT {
        return Err(CertificateError::Version(cert.format_version));
    }
    if cert.scope != CERTIFICATE_SCOPE {
        return Err(CertificateError::Scope(cert.scope.clone()));
    }
    let computed = cert.compute_digest();
    if computed != cert.digest {
        return Err(CertificateError::Digest {
            stored: cert.digest.clone(),
            computed,
        });
    }
    let x = cert.point().map_err(|e| CertificateError::Point(e.to_string()))?;
    if !check_sep_feasible(&x).feasible {
        return Err(CertificateError::Point("not in the subtour polytope".into()));
    }
    let g = support_graph(&x);
    for (index, cw) in cert.walks.iter().enumerate() {
        if let Err(violation) = is_valid_walk(&g, &cw.walk) {
            return Err(CertificateError::Walk { index, violation });
        }
        if !cw.mu.is_positive() {
            return Err(CertificateError::NonPositiveWeight {
                index,
                mu: cw.mu.clone(),
            });
        }
    }
    let mu = DualAssignment::new(cert.walks.iter().map(|cw| (cw.walk.clone(), cw.mu.clone())));
    verify_dual_feasible(&x, &mu).map_err(CertificateError::Dual)?;
    let total: Rational = cert.walks.iter().map(|cw| cw.mu.clone()).sum();
    if total != cert.value {
        return Err(CertificateError::Objective {
            stated: cert.value.clone(),
            computed: total,
        });
    }

    let cost_edges: Vec<Edge> = cert.costs.iter().map(|c| c.edge).collect();
    let support: Vec<Edge> = x.weights().keys().copied().collect();
    if cost_edges != support {
        return Err(CertificateError::CostSupport);
    }
    if let Some(c) = cert.costs.iter().find(|c| c.value.is_negative()) {
        return Err(CertificateError::NegativeCost(c.edge));
    }
    let costs = g.relabel_edges(cert.costs.iter().map(|c| c.value.clone()));
    let cx: Rational = x.weights().iter().map(|(e, w)| costs.label(*e).unwrap() * w).sum();
    if cx != cert.value {
        return Err(CertificateError::PrimalValue {
            stated: cert.value.clone(),
            computed: cx,
        });
    }
    for (index, cw) in cert.walks.iter().enumerate() {
        let cost = cw.walk.cost(&costs);
        if !cost.is_one() {
            return Err(CertificateError::WalkCost { index, cost });
        }
    }
    let cheapest = min_cost_walk(&costs)
        .map_err(|e| CertificateError::Point(e.to_string()))?
        .1;
    if cheapest < Rational::one() {
        return Err(CertificateError::PrimalInfeasible(cheapest));
    }

    let listed: Vec<Edge> = cert.constants.iter().map(|c| c.edge).collect();
    if listed != x.one_edges() {
        return Err(CertificateError::ConstantSet);
    }
    for c in &cert.constants {
        let computed = c_formula(cert.walks.iter().map(|cw| (&cw.walk, &cw.mu)), c.edge);
        if computed != c.value {
            return Err(CertificateError::Constant {
                edge: c.edge,
                stated: c.value.clone(),
                computed,
            });
        }
    }
    let Some(star) = cert.constants.iter().max_by(|a, b| a.value.cmp(&b.value)) else {
        return Err(CertificateError::ConstantSet);
    };
    if star.value < Rational::one() {
        return Err(CertificateError::ConstantBelowOne {
            edge: star.edge,
            value: star.value.clone(),
        });
    }
    let c_star = star.value.clone();
    if c_star != cert.c_star {
        return Err(CertificateError::CStar {
            stated: cert.c_star.clone(),
            computed: c_star,
        });
    }
    let gap_plus = cert.value.recip();
    if gap_plus != cert.gap_plus {
        return Err(CertificateError::GapPlus {
            stated: cert.gap_plus.clone(),
            computed: gap_plus,
        });
    }
    let bound = &c_star * &gap_plus;
    if bound != cert.bound {
        return Err(CertificateError::Bound {
            stated: cert.bound.clone(),
            computed: bound,
        });
    }
    Ok(())
}
