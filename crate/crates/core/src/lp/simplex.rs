//! Two-phase revised simplex over exact rationals with Bland's rule.
//!
//! The basis inverse is kept dense (`m × m`), columns sparse. Every optimal
//! solution is checked against its dual before it is returned.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    /// One finite lower bound per variable.
    pub lower_bounds: Vec<Rational>,
}

impl LinearProgram {
    /// Variables start with lower bound 0.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let lower_bounds = vec![Rational::zero(); objective.len()];
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> usize {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    /// Appends a variable with objective `cost` and the given entries in
    /// existing rows.
    pub fn add_column(&mut self, cost: Rational, column: Vec<(usize, Rational)>) -> usize {
        let j = self.objective.len();
        self.objective.push(cost);
        self.lower_bounds.push(Rational::zero());
        for (i, a) in column {
            self.constraints[i].coeffs.push((j, a));
        }
        j
    }

    pub fn activity(&self, row: usize, x: &[Rational]) -> Rational {
        self.constraints[row].coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }
}

/// Optimal primal and dual solution.
///
/// Dual signs follow the model's sense: for minimization `≥` rows have
/// nonnegative duals and `≤` rows nonpositive ones, and the other way round for
/// maximization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub primal: Vec<Rational>,
    pub value: Rational,
    pub duals: Vec<Rational>,
    pub tight: Vec<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Structural,
    Slack,
    Artificial,
}

struct Solver {
    m: usize,
    cols: Vec<Vec<(usize, Rational)>>,
    kind: Vec<Kind>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize, Vec<Rational>),
}

impl Solver {
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (yk, bk) in y.iter_mut().zip(&self.binv[i]) {
                if !bk.is_zero() {
                    *yk += &cost[b] * bk;
                }
            }
        }
        y
    }

    fn ftran(&self, j: usize) -> Vec<Rational> {
        (0..self.m)
            .map(|i| {
                self.cols[j]
                    .iter()
                    .filter(|(r, _)| !self.binv[i][*r].is_zero())
                    .map(|(r, a)| &self.binv[i][*r] * a)
                    .sum()
            })
            .collect()
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[Rational]) {
        let p = u[r].clone();
        for v in self.binv[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        self.xb[r] /= &p;
        let pivot_row = self.binv[r].clone();
        let xr = self.xb[r].clone();
        for i in 0..self.m {
            if i == r || u[i].is_zero() {
                continue;
            }
            for (v, pr) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *v -= &u[i] * pr;
                }
            }
            self.xb[i] = &self.xb[i] - &u[i] * &xr;
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }

    fn run(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> PhaseEnd {
        loop {
            let y = self.duals(cost);
            // Bland: the lowest-index improving column enters.
            let entering = (0..self.cols.len()).find(|&j| {
                if self.is_basic[j] || !allowed(j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, a) in &self.cols[j] {
                    if !y[*i].is_zero() {
                        d -= &y[*i] * a;
                    }
                }
                d.is_negative()
            });
            let Some(j) = entering else {
                return PhaseEnd::Optimal;
            };
            let u = self.ftran(j);
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                if !u[i].is_positive() {
                    continue;
                }
                let ratio = &self.xb[i] / &u[i];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j, &u),
                None => return PhaseEnd::Unbounded(j, u),
            }
        }
    }
}

/// Solves `lp` exactly. Infeasibility and unboundedness are detected and
/// reported with a certificate vector.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let nv = lp.num_vars();
    let m = lp.constraints.len();
    assert_eq!(lp.lower_bounds.len(), nv);

    // Internally: minimize, x = l + x' with x' >= 0, rows with rhs >= 0.
    let cmin: Vec<Rational> = match lp.sense {
        Sense::Minimize => lp.objective.clone(),
        Sense::Maximize => lp.objective.iter().map(|c| -c).collect(),
    };
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nv];
    let mut sign = vec![Rational::one(); m];
    let mut rel = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (i, row) in lp.constraints.iter().enumerate() {
        let shift: Rational = row.coeffs.iter().map(|(j, a)| a * &lp.lower_bounds[*j]).sum();
        let mut rhs = &row.rhs - shift;
        let mut r = row.relation;
        if rhs.is_negative() {
            sign[i] = -Rational::one();
            rhs = -rhs;
            r = match r {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        for (j, a) in &row.coeffs {
            if !a.is_zero() {
                cols[*j].push((i, a * &sign[i]));
            }
        }
        rel.push(r);
        b.push(rhs);
    }
    // Merge duplicate entries within a column.
    for col in cols.iter_mut() {
        col.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(col.len());
        for (i, a) in col.drain(..) {
            match merged.last_mut() {
                Some((k, v)) if *k == i => *v += a,
                _ => merged.push((i, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        *col = merged;
    }
    let mut kind = vec![Kind::Structural; nv];
    let mut basis = vec![usize::MAX; m];
    for i in 0..m {
        match rel[i] {
            Relation::Le => {
                cols.push(vec![(i, Rational::one())]);
                kind.push(Kind::Slack);
                basis[i] = cols.len() - 1;
            }
            Relation::Ge => {
                cols.push(vec![(i, -Rational::one())]);
                kind.push(Kind::Slack);
            }
            Relation::Eq => {}
        }
    }
    for i in 0..m {
        if basis[i] == usize::MAX {
            cols.push(vec![(i, Rational::one())]);
            kind.push(Kind::Artificial);
            basis[i] = cols.len() - 1;
        }
    }
    let ncols = cols.len();
    let mut is_basic = vec![false; ncols];
    for &j in &basis {
        is_basic[j] = true;
    }
    let mut s = Solver {
        m,
        cols,
        kind,
        basis,
        is_basic,
        binv: (0..m)
            .map(|i| (0..m).map(|k| if i == k { Rational::one() } else { Rational::zero() }).collect())
            .collect(),
        xb: b.clone(),
    };

    let has_artificial = s.kind.contains(&Kind::Artificial);
    if has_artificial {
        let c1: Vec<Rational> = s
            .kind
            .iter()
            .map(|k| if *k == Kind::Artificial { Rational::one() } else { Rational::zero() })
            .collect();
        s.run(&c1, |_| true);
        let infeasibility: Rational = s
            .basis
            .iter()
            .zip(&s.xb)
            .filter(|(j, _)| s.kind[**j] == Kind::Artificial)
            .map(|(_, v)| v.clone())
            .sum();
        if infeasibility.is_positive() {
            let y = s.duals(&c1);
            return Err(Error::Infeasible {
                farkas: y.iter().zip(&sign).map(|(v, sg)| format(&(v * sg))).collect(),
            });
        }
        for r in 0..m {
            if s.kind[s.basis[r]] != Kind::Artificial {
                continue;
            }
            let replacement = (0..ncols)
                .filter(|&j| !s.is_basic[j] && s.kind[j] != Kind::Artificial)
                .find_map(|j| {
                    let u = s.ftran(j);
                    (!u[r].is_zero()).then_some((j, u))
                });
            if let Some((j, u)) = replacement {
                s.pivot(r, j, &u);
            }
        }
    }

    let mut c2 = cmin.clone();
    c2.resize(ncols, Rational::zero());
    let kinds = s.kind.clone();
    if let PhaseEnd::Unbounded(j, u) = s.run(&c2, |j| kinds[j] != Kind::Artificial) {
        let mut ray = vec![Rational::zero(); nv];
        if j < nv {
            ray[j] = Rational::one();
        }
        for (i, &bj) in s.basis.iter().enumerate() {
            if bj < nv {
                ray[bj] = -u[i].clone();
            }
        }
        return Err(Error::Unbounded {
            ray: ray.iter().map(format).collect(),
        });
    }

    let mut primal = lp.lower_bounds.clone();
    for (i, &j) in s.basis.iter().enumerate() {
        if j < nv {
            primal[j] += &s.xb[i];
        }
    }
    let y_internal = s.duals(&c2);
    let ymin: Vec<Rational> = y_internal.iter().zip(&sign).map(|(y, sg)| y * sg).collect();
    certify(lp, &cmin, &primal, &ymin)?;

    let value: Rational = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
    let duals = match lp.sense {
        Sense::Minimize => ymin,
        Sense::Maximize => ymin.into_iter().map(|v| -v).collect(),
    };
    let tight = (0..m).map(|i| lp.activity(i, &primal) == lp.constraints[i].rhs).collect();
    Ok(LpSolution {
        primal,
        value,
        duals,
        tight,
    })
}

/// Primal feasibility, dual feasibility and equal objectives, all exact, for
/// the minimization form with costs `cmin`.
fn certify(lp: &LinearProgram, cmin: &[Rational], x: &[Rational], y: &[Rational]) -> Result<()> {
    let fail = |msg: String| Err(Error::Certification(msg));
    for (j, (xj, lj)) in x.iter().zip(&lp.lower_bounds).enumerate() {
        if xj < lj {
            return fail(format!("variable {j} below its lower bound"));
        }
    }
    let mut reduced = cmin.to_vec();
    for (i, row) in lp.constraints.iter().enumerate() {
        let act = lp.activity(i, x);
        let ok = match row.relation {
            Relation::Le => act <= row.rhs && !y[i].is_positive(),
            Relation::Ge => act >= row.rhs && !y[i].is_negative(),
            Relation::Eq => act == row.rhs,
        };
        if !ok {
            return fail(format!("row {i} violates primal or dual sign feasibility"));
        }
        for (j, a) in &row.coeffs {
            reduced[*j] -= &y[i] * a;
        }
    }
    if let Some(j) = reduced.iter().position(|r| r.is_negative()) {
        return fail(format!("negative reduced cost on variable {j}"));
    }
    let primal: Rational = cmin.iter().zip(x).map(|(c, v)| c * v).sum();
    let dual: Rational = y.iter().zip(&lp.constraints).map(|(v, r)| v * &r.rhs).sum::<Rational>()
        + reduced
            .iter()
            .zip(&lp.lower_bounds)
            .map(|(r, l)| r * l)
            .sum::<Rational>();
    if primal != dual {
        return fail(format!("duality gap {} - {}", format(&primal), format(&dual)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn single_variable() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1)]);
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(1));
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.primal, vec![int(1)]);
        assert_eq!(s.duals, vec![int(1)]);
    }

    #[test]
    fn degenerate_symmetric() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(1)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Ge, int(1));
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.duals, vec![int(1)]);
        assert!(s.tight[0]);
    }

    #[test]
    fn maximization_with_equality_and_bounds() {
        // max 3x + 2y  s.t. x + y = 4, x <= 3, y >= 1/2, x >= 1
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(3), int(2)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(4));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(3));
        lp.lower_bounds = vec![int(1), frac(1, 2)];
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.primal, vec![int(3), int(1)]);
        assert_eq!(s.value, int(11));
        assert_eq!(s.duals, vec![int(2), int(1)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1)]);
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(-1));
        assert!(matches!(simplex_solve(&lp), Err(Error::Infeasible { .. })));
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(0)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(-1))], Relation::Le, int(2));
        match simplex_solve(&lp) {
            Err(Error::Unbounded { ray }) => assert_eq!(ray, vec!["1", "1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(2)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(2));
        lp.add_constraint(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(4));
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.value, int(2));
    }

    /// Brute force over vertices of `{x >= 0 : Ax <= b}` in two variables.
    fn brute_2d(a: &[[i64; 2]], b: &[i64], c: [i64; 2]) -> Rational {
        let mut rows: Vec<([Rational; 2], Rational)> =
            a.iter().zip(b).map(|(r, v)| ([int(r[0]), int(r[1])], int(*v))).collect();
        rows.push(([int(-1), int(0)], int(0)));
        rows.push(([int(0), int(-1)], int(0)));
        let mut best: Option<Rational> = None;
        for i in 0..rows.len() {
            for k in i + 1..rows.len() {
                let (p, q) = (&rows[i], &rows[k]);
                let det = &p.0[0] * &q.0[1] - &p.0[1] * &q.0[0];
                if det.is_zero() {
                    continue;
                }
                let x0 = (&p.1 * &q.0[1] - &p.0[1] * &q.1) / &det;
                let x1 = (&p.0[0] * &q.1 - &p.1 * &q.0[0]) / &det;
                if rows.iter().all(|(r, v)| &r[0] * &x0 + &r[1] * &x1 <= *v) {
                    let val = int(c[0]) * &x0 + int(c[1]) * &x1;
                    if best.as_ref().map_or(true, |bv| val > *bv) {
                        best = Some(val);
                    }
                }
            }
        }
        best.unwrap()
    }

    proptest! {
        #[test]
        fn bounded_2d_matches_vertex_enumeration(
            a in prop::collection::vec([1i64..6, 1i64..6], 1..5),
            b in prop::collection::vec(0i64..10, 5),
            c in [0i64..5, 0i64..5],
        ) {
            let b = &b[..a.len()];
            let mut lp = LinearProgram::new(Sense::Maximize, vec![int(c[0]), int(c[1])]);
            for (r, v) in a.iter().zip(b) {
                lp.add_constraint(vec![(0, int(r[0])), (1, int(r[1]))], Relation::Le, int(*v));
            }
            let s = simplex_solve(&lp).unwrap();
            prop_assert_eq!(s.value, brute_2d(&a, b, c));
        }
    }
}
