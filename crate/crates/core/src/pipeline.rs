//! Vertex files, ancestor filtering, family runs and small-n surveys.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::{canonical_form, canonical_labeling, CanonicalForm};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::gap::{gap_plus, gbe, GapBoundCertificate, GbeOutcome};
use crate::graph::{support_graph, Edge, SepPoint};
use crate::par;
use crate::polytope::{check_sep_feasible, enumerate_sep_vertices, expand, is_vertex, MAX_ENUMERATION_NODES};
use crate::rational::{self, serde_str, Rational};

/// Parses the text format: per point a header `v <n> <m>` followed by `m`
/// lines `<i> <j> <weight>` with `i < j`. `#` starts a comment.
pub fn parse_vertices(text: &str) -> Result<Vec<SepPoint>> {
    let err = |line: usize, message: String| Error::VertexFile { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut points = Vec::new();
    while let Some((header_line, header)) = lines.next() {
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match fields.as_slice() {
            ["v", n, m] => (
                n.parse::<usize>().map_err(|_| err(header_line, format!("bad node count {n:?}")))?,
                m.parse::<usize>().map_err(|_| err(header_line, format!("bad edge count {m:?}")))?,
            ),
            _ => return Err(err(header_line, format!("expected `v <n> <m>`, found {header:?}"))),
        };
        let mut weights: BTreeMap<Edge, Rational> = BTreeMap::new();
        for _ in 0..m {
            let Some((line, text)) = lines.next() else {
                return Err(err(header_line, format!("block ends before {m} edges")));
            };
            let f: Vec<&str> = text.split_whitespace().collect();
            let [i, j, w] = f.as_slice() else {
                return Err(err(line, format!("expected `<i> <j> <weight>`, found {text:?}")));
            };
            let i: usize = i.parse().map_err(|_| err(line, format!("bad node {i:?}")))?;
            let j: usize = j.parse().map_err(|_| err(line, format!("bad node {j:?}")))?;
            if i >= j || j >= n {
                return Err(err(line, format!("need 0 <= i < j < {n}, found {i} {j}")));
            }
            let w = rational::parse(w).map_err(|e| err(line, e.to_string()))?;
            if w <= Rational::from_integer(0.into()) || w > Rational::one() {
                return Err(err(line, format!("weight {w} outside (0, 1]")));
            }
            if weights.insert(Edge::new(i, j), w).is_some() {
                return Err(err(line, format!("duplicate edge {i} {j}")));
            }
        }
        let x = SepPoint::new(n, weights).map_err(|e| err(header_line, e.to_string()))?;
        if let Some(v) = check_sep_feasible(&x).violated {
            return Err(err(header_line, format!("point is not in the subtour polytope: {v:?}")));
        }
        points.push(x);
    }
    Ok(points)
}

pub fn parse_vertex_file(path: &Path) -> Result<Vec<SepPoint>> {
    parse_vertices(&std::fs::read_to_string(path)?)
}

pub fn serialize_vertices(points: &[SepPoint]) -> String {
    let mut out = String::new();
    for x in points {
        writeln!(out, "v {} {}", x.node_count(), x.edge_count()).unwrap();
        for (e, w) in x.weights() {
            writeln!(out, "{} {} {}", e.lo(), e.hi(), rational::format(w)).unwrap();
        }
    }
    out
}

/// Fractional points with `|E_x| = n + k`, no degree-2 node and
/// `k + 3 <= n <= 2k`, one per isomorphism class, relabeled canonically and
/// sorted by canonical form.
pub fn filter_ancestors(points: &[SepPoint], k: usize) -> Vec<SepPoint> {
    let mut classes: BTreeMap<CanonicalForm, SepPoint> = BTreeMap::new();
    for x in points {
        let n = x.node_count();
        if x.is_integral() || x.edge_count() != n + k || n < k + 3 || n > 2 * k {
            continue;
        }
        if (0..n).any(|v| x.degree(v) == 2) {
            continue;
        }
        let (form, perm) = canonical_labeling(&support_graph(x));
        classes.entry(form).or_insert_with(|| x.permute(&perm));
    }
    classes.into_values().collect()
}

/// Where the ancestors of a family come from when no file is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySource {
    /// Filtered from the enumeration oracle.
    Enumerated,
    /// The shipped fixtures.
    Fixtures,
    /// Needs external vertex lists.
    Absent,
}

pub fn family_source(k: usize) -> FamilySource {
    match k {
        k if 2 * k <= MAX_ENUMERATION_NODES => FamilySource::Enumerated,
        4 => FamilySource::Fixtures,
        _ => FamilySource::Absent,
    }
}

/// Built-in ancestors of family `k`, or `None` when they are not available
/// without external data.
pub fn builtin_ancestors(k: usize) -> Result<Option<Vec<SepPoint>>> {
    Ok(match family_source(k) {
        FamilySource::Enumerated => {
            let mut pts = Vec::new();
            for n in k + 3..=2 * k {
                pts.extend(enumerate_sep_vertices(n)?);
            }
            Some(filter_ancestors(&pts, k))
        }
        FamilySource::Fixtures => Some(filter_ancestors(&fixtures::order4(), k)),
        FamilySource::Absent => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AncestorRow {
    pub index: usize,
    pub n: usize,
    pub edges: usize,
    #[serde(with = "serde_str")]
    pub gb: Rational,
    #[serde(with = "serde_str")]
    pub bound: Rational,
    pub iterations: usize,
    pub within_alpha: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub k: usize,
    #[serde(with = "serde_str")]
    pub alpha: Rational,
    pub max_iter: usize,
    pub ancestors: usize,
    /// `None` for an empty family.
    #[serde(serialize_with = "opt_rational")]
    pub max_bound: Option<Rational>,
    pub max_iterations: usize,
    pub failures: usize,
    pub rows: Vec<AncestorRow>,
}

fn opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&rational::format(r)),
        None => s.serialize_none(),
    }
}

impl FamilyReport {
    pub fn all_within_alpha(&self) -> bool {
        self.failures == 0
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:>5} {:>3} {:>4} {:>10} {:>10} {:>5}", "index", "n", "|E|", "GB", "GBe", "iters").unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:>5} {:>3} {:>4} {:>10} {:>10} {:>5}{}",
                r.index,
                r.n,
                r.edges,
                r.gb.to_string(),
                r.bound.to_string(),
                r.iterations,
                if r.within_alpha { "" } else { "  > alpha" }
            )
            .unwrap();
        }
        let max = self.max_bound.as_ref().map_or("-".to_string(), |b| b.to_string());
        writeln!(
            out,
            "k={} ancestors={} max bound={} max additional iterations={} failures={}",
            self.k, self.ancestors, max, self.max_iterations, self.failures
        )
        .unwrap();
        out
    }
}

/// Runs GBe on every ancestor (in parallel when enabled) and aggregates.
/// Each ancestor must pass the vertex test first.
pub fn run_family(
    k: usize,
    ancestors: &[SepPoint],
    alpha: &Rational,
    max_iter: usize,
) -> Result<(FamilyReport, Vec<GbeOutcome>)> {
    let outcomes: Vec<GbeOutcome> = par::map_range(ancestors.len(), |i| {
        let x = &ancestors[i];
        if !is_vertex(x)?.is_vertex {
            return Err(Error::InvalidPoint(format!("ancestor {i} is not a vertex")));
        }
        gbe(x, alpha, max_iter)
    })
        .into_iter()
        .collect::<Result<_>>()?;
    let rows: Vec<AncestorRow> = ancestors
        .iter()
        .zip(&outcomes)
        .enumerate()
        .map(|(index, (x, o))| AncestorRow {
            index,
            n: x.node_count(),
            edges: x.edge_count(),
            gb: o.certificates[0].bound.clone(),
            bound: o.bound.clone(),
            iterations: o.iterations,
            within_alpha: o.bound <= *alpha,
        })
        .collect();
    let report = FamilyReport {
        k,
        alpha: alpha.clone(),
        max_iter,
        ancestors: ancestors.len(),
        max_bound: rows.iter().map(|r| r.bound.clone()).max(),
        max_iterations: rows.iter().map(|r| r.iterations).max().unwrap_or(0),
        failures: rows.iter().filter(|r| !r.within_alpha).count(),
        rows,
    };
    Ok((report, outcomes))
}

/// The certificate achieving each outcome's bound.
pub fn best_certificates(outcomes: &[GbeOutcome]) -> Vec<GapBoundCertificate> {
    outcomes.iter().map(|o| o.certificates[o.best].clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub id: usize,
    pub edges: usize,
    #[serde(with = "serde_str")]
    pub gap_plus: Rational,
}

/// One row per vertex class on `n` nodes, ordered by `(|E|, canonical form)`.
pub fn survey(n: usize) -> Result<Vec<SurveyRow>> {
    let vertices = enumerate_sep_vertices(n)?;
    let gaps = par::map(&vertices, gap_plus)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(vertices
        .iter()
        .zip(gaps)
        .enumerate()
        .map(|(id, (x, g))| SurveyRow {
            id,
            edges: x.edge_count(),
            gap_plus: g,
        })
        .collect())
}

/// Successor of `x` obtained by spreading at most `max_added` new nodes over its
/// 1-edges at random. Returns the counts per 1-edge too.
pub fn random_successor(x: &SepPoint, max_added: usize, rng: &mut impl Rng) -> Result<(SepPoint, Vec<usize>)> {
    let ones = x.one_edges();
    let total = rng.gen_range(0..=max_added);
    let mut counts = vec![0; ones.len()];
    for _ in 0..total {
        counts[rng.gen_range(0..ones.len())] += 1;
    }
    Ok((expand(x, &ones, &counts)?, counts))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub counts: Vec<usize>,
    #[serde(with = "serde_str")]
    pub gap_plus: Rational,
    pub within_bound: bool,
}

/// Compares `Gap⁺` of `samples` random successors with a certified bound.
pub fn successor_sweep(
    x: &SepPoint,
    bound: &Rational,
    samples: usize,
    max_added: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let successors = (0..samples)
        .map(|_| random_successor(x, max_added, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    par::map(&successors, |(y, counts)| {
        let g = gap_plus(y)?;
        Ok(SweepRow {
            counts: counts.clone(),
            within_bound: g <= *bound,
            gap_plus: g,
        })
    })
    .into_iter()
    .collect()
}

/// Canonical form of a point's support graph.
pub fn point_form(x: &SepPoint) -> CanonicalForm {
    canonical_form(&support_graph(x))
}
