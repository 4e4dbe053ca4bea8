//! Canonical labeling of small weighted graphs.
//!
//! Color refinement with exact weight classes, then individualization over the
//! cells that refinement cannot split. The canonical form is the
//! lexicographically smallest relabeled edge list over all leaves of that search
//! tree; since the tree is built from labeling-invariant data only, the minimum
//! is the same for every member of an isomorphism class. Automorphisms found at
//! leaves prune children lying in an already explored orbit.


use crate::graph::WeightedGraph;
use crate::rational::Rational;

/// Relabeled edge list `(i, j, weight)` with `i < j`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(usize, usize, Rational)>,
}

pub fn canonical_form(g: &WeightedGraph) -> CanonicalForm {
    canonical_labeling(g).0
}

/// Returns the form together with the labeling `perm` that produces it
/// (node `v` of `g` becomes `perm[v]`).
pub fn canonical_labeling(g: &WeightedGraph) -> (CanonicalForm, Vec<usize>) {
    let n = g.node_count();
    let mut weights: Vec<&Rational> = g.edges().iter().map(|(_, w)| w).collect();
    weights.sort();
    weights.dedup();
    let mut color = vec![vec![0u32; n]; n];
    let mut neighbors = vec![Vec::new(); n];
    for (e, w) in g.edges() {
        let c = weights.binary_search(&w).unwrap() as u32 + 1;
        color[e.lo()][e.hi()] = c;
        color[e.hi()][e.lo()] = c;
        neighbors[e.lo()].push(e.hi());
        neighbors[e.hi()].push(e.lo());
    }
    let ctx = Search {
        n,
        color: &color,
        neighbors: &neighbors,
    };
    let mut st = State::default();
    let start = ctx.refine(vec![(0..n).collect()]);
    ctx.search(start, &mut Vec::new(), &mut st);
    let (code, perm) = st.best.unwrap_or_default();
    let edges = code
        .into_iter()
        .map(|(i, j, c)| (i, j, weights[c as usize - 1].clone()))
        .collect();
    (CanonicalForm { n, edges }, perm)
}

struct Search<'a> {
    n: usize,
    color: &'a [Vec<u32>],
    neighbors: &'a [Vec<usize>],
}

type Partition = Vec<Vec<usize>>;
type Code = Vec<(usize, usize, u32)>;

impl Search<'_> {
    fn cell_of(&self, p: &Partition) -> Vec<usize> {
        let mut cell = vec![0; self.n];
        for (k, c) in p.iter().enumerate() {
            for &v in c {
                cell[v] = k;
            }
        }
        cell
    }

    /// Equitable refinement; cells are split and ordered by neighbor signatures.
    fn refine(&self, mut p: Partition) -> Partition {
        loop {
            let cell = self.cell_of(&p);
            let mut next: Partition = Vec::with_capacity(p.len());
            for c in &p {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, u32)>, usize)> = c
                    .iter()
                    .map(|&v| {
                        let mut sig: Vec<(usize, u32)> = self.neighbors[v]
                            .iter()
                            .map(|&u| (cell[u], self.color[v][u]))
                            .collect();
                        sig.sort_unstable();
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut group: Vec<usize> = Vec::new();
                for i in 0..keyed.len() {
                    if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                        next.push(std::mem::take(&mut group));
                    }
                    group.push(keyed[i].1);
                }
                next.push(group);
            }
            if next.len() == p.len() {
                return next;
            }
            p = next;
        }
    }

    fn search(&self, p: Partition, prefix: &mut Vec<usize>, st: &mut State) {
        let Some(target) = p.iter().position(|c| c.len() > 1) else {
            let perm = self.cell_of(&p);
            let mut code: Code = Vec::new();
            for v in 0..self.n {
                for &u in &self.neighbors[v] {
                    if v < u {
                        let (a, b) = (perm[v].min(perm[u]), perm[v].max(perm[u]));
                        code.push((a, b, self.color[v][u]));
                    }
                }
            }
            code.sort_unstable();
            match &st.best {
                Some((b, _)) if code > *b => {}
                Some((b, bp)) if code == *b => {
                    let mut inv = vec![0; self.n];
                    for (v, &l) in bp.iter().enumerate() {
                        inv[l] = v;
                    }
                    st.automorphisms.push(perm.iter().map(|&l| inv[l]).collect());
                }
                _ => st.best = Some((code, perm)),
            }
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &p[target] {
            if !explored.is_empty() && self.same_orbit(v, &explored, prefix, &st.automorphisms) {
                continue;
            }
            explored.push(v);
            let mut child: Partition = Vec::with_capacity(p.len() + 1);
            child.extend(p[..target].iter().cloned());
            child.push(vec![v]);
            child.push(p[target].iter().copied().filter(|&u| u != v).collect());
            child.extend(p[target + 1..].iter().cloned());
            prefix.push(v);
            self.search(self.refine(child), prefix, st);
            prefix.pop();
        }
    }

    /// Whether `v` is mapped onto an explored vertex by the group generated by
    /// the known automorphisms that fix `prefix` pointwise.
    fn same_orbit(&self, v: usize, explored: &[usize], prefix: &[usize], autos: &[Vec<usize>]) -> bool {
        let mut root: Vec<usize> = (0..self.n).collect();
        fn find(root: &mut [usize], mut v: usize) -> usize {
            while root[v] != v {
                root[v] = root[root[v]];
                v = root[v];
            }
            v
        }
        for g in autos.iter().filter(|g| prefix.iter().all(|&u| g[u] == u)) {
            for (a, &b) in g.iter().enumerate() {
                let (ra, rb) = (find(&mut root, a), find(&mut root, b));
                root[ra] = rb;
            }
        }
        let rv = find(&mut root, v);
        explored.iter().any(|&u| find(&mut root, u) == rv)
    }
}

#[derive(Default)]
struct State {
    best: Option<(Code, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}
