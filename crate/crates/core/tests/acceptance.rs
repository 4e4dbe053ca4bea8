//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. All comparisons are exact rational equalities.

use std::collections::BTreeSet;
use std::time::Instant;

use gapbound::canon::canonical_form;
use gapbound::fixtures;
use gapbound::gap::{compute_c, gbe, verify_certificate, GapBoundCertificate};
use gapbound::graph::{complete_edges, support_graph};
use gapbound::lp::{lift_dual_assignment, solve_opt2, solve_opt_plus_full, tsp_exact};
use gapbound::par;
use gapbound::pipeline::{
    builtin_ancestors, family_source, filter_ancestors, parse_vertices, point_form, random_successor,
    run_family, FamilySource,
};
use gapbound::polytope::{bb_move, contract_to_ancestor, enumerate_sep_vertices, expand, is_vertex};
use gapbound::rational::{frac, int};
use gapbound::walks::{enumerate_walks, min_cost_walk};
use gapbound::{CostMatrix, Rational, SepPoint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn alpha() -> Rational {
    frac(4, 3)
}

fn family_k3() -> Outcome {
    let pts = enumerate_sep_vertices(6).map_err(|e| e.to_string())?;
    let ancestors = filter_ancestors(&pts, 3);
    ensure(ancestors.len() == 1, || format!("{} ancestors", ancestors.len()))?;
    let (report, _) = run_family(3, &ancestors, &alpha(), 10).map_err(|e| e.to_string())?;
    ensure(report.max_bound == Some(alpha()), || format!("bound {:?}", report.max_bound))?;
    ensure(report.max_iterations == 0, || format!("{} iterations", report.max_iterations))?;
    Ok("1 ancestor, bound 4/3, 0 additional iterations".into())
}

fn family_k4() -> Outcome {
    let ancestors = filter_ancestors(&fixtures::order4(), 4);
    let forms: BTreeSet<_> = ancestors.iter().map(point_form).collect();
    ensure(ancestors.len() == 5 && forms.len() == 5, || format!("{} ancestors", ancestors.len()))?;
    let (report, _) = run_family(4, &ancestors, &alpha(), 10).map_err(|e| e.to_string())?;
    for r in &report.rows {
        ensure(r.bound <= alpha() && r.iterations <= 2, || {
            format!("ancestor {}: bound {} after {} iterations", r.index, r.bound, r.iterations)
        })?;
    }
    let gb: Vec<String> = report.rows.iter().map(|r| r.gb.to_string()).collect();
    Ok(format!(
        "5 ancestors, max bound {}, max {} additional iterations (GB before enhancement: {})",
        report.max_bound.unwrap(),
        report.max_iterations,
        gb.join(", ")
    ))
}

fn formulation_equivalence() -> Outcome {
    let values = par::map(&fixtures::all_ancestors(), |x| {
        let a = solve_opt2(x).map_err(|e| e.to_string())?.value;
        let b = solve_opt_plus_full(x).map_err(|e| e.to_string())?.value;
        ensure(a == b, || format!("walk model {a}, full model {b}"))?;
        Ok(a.to_string())
    })
    .into_iter()
    .collect::<Result<Vec<_>, String>>()?;
    Ok(format!("6 fixtures agree: {}", values.join(", ")))
}

fn walk_oracle() -> Outcome {
    let mut checked = 0;
    for (i, x) in fixtures::all_ancestors().iter().enumerate() {
        let g = support_graph(x);
        if g.edge_count() > 12 {
            continue;
        }
        let walks = enumerate_walks(&g).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        let costs: Vec<_> = (0..100)
            .map(|_| g.relabel_edges((0..g.edge_count()).map(|_| frac(rng.gen_range(0..60), rng.gen_range(1..13)))))
            .collect();
        par::map(&costs, |c| {
            let fast = min_cost_walk(c).map_err(|e| e.to_string())?.1;
            let slow = walks.iter().map(|w| w.cost(c)).min().unwrap();
            ensure(fast == slow, || format!("fixture {i}: {fast} vs {slow}"))
        })
        .into_iter()
        .collect::<Result<Vec<_>, String>>()?;
        checked += 1;
    }
    ensure(checked == 6, || format!("only {checked} fixtures have |E| <= 12"))?;
    Ok("100 random cost vectors on each of 6 fixtures".into())
}

fn c_invariance() -> Outcome {
    let mut pairs = 0;
    for x in fixtures::all_ancestors() {
        let mu = solve_opt2(&x).map_err(|e| e.to_string())?.mu;
        let ones = x.one_edges();
        for &e1 in &ones {
            for &e2 in ones.iter().filter(|&&e| e != e1) {
                let before = compute_c(&x, &mu, e2).map_err(|e| e.to_string())?;
                for d in 1..=2 {
                    let (y, _) = gapbound::polytope::expand_edge(&x, e1.lo(), e1.hi(), d).map_err(|e| e.to_string())?;
                    let lifted = lift_dual_assignment(&mu, &x, e1, d).map_err(|e| e.to_string())?;
                    let after = compute_c(&y, &lifted, e2).map_err(|e| e.to_string())?;
                    ensure(before == after, || format!("{e1} then {e2}, d={d}: {before} vs {after}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (pair, d) combinations"))
}

fn successor_soundness() -> Outcome {
    let ancestors = fixtures::all_ancestors();
    let mut jobs = Vec::new();
    for (i, x) in ancestors.iter().enumerate() {
        let bound = gbe(x, &alpha(), 10).map_err(|e| e.to_string())?.bound;
        let mut rng = ChaCha8Rng::seed_from_u64(600 + i as u64);
        for _ in 0..10 {
            let (_, counts) = random_successor(x, 6, &mut rng).map_err(|e| e.to_string())?;
            jobs.push((i, bound.clone(), counts));
        }
    }
    let moves = par::map(&jobs, |(i, bound, counts)| {
        let x = &ancestors[*i];
        let ones = x.one_edges();
        // One BB-move per step on the way from the ancestor to the successor.
        let mut partial = vec![0; counts.len()];
        let mut prev = solve_opt2(x).map_err(|e| e.to_string())?.value.recip();
        let mut steps = 0;
        for (slot, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                partial[slot] += 1;
                let y = expand(x, &ones, &partial).map_err(|e| e.to_string())?;
                let g = solve_opt2(&y).map_err(|e| e.to_string())?.value.recip();
                ensure(g >= prev, || format!("ancestor {i}: Gap+ fell from {prev} to {g} at {partial:?}"))?;
                prev = g;
                steps += 1;
            }
        }
        ensure(prev <= *bound, || format!("ancestor {i} successor {counts:?}: Gap+ {prev} > bound {bound}"))?;
        Ok(steps)
    })
    .into_iter()
    .collect::<Result<Vec<usize>, String>>()?;
    Ok(format!(
        "{} successors within their bounds, {} single BB-moves monotone",
        jobs.len(),
        moves.iter().sum::<usize>()
    ))
}

fn random_tour(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order[1..].shuffle(rng);
    order
}

fn vertex_machinery() -> Outcome {
    let ancestors = fixtures::all_ancestors();
    let mut accepted = 0;
    for x in &ancestors {
        let mut pts = vec![x.clone()];
        for e in x.one_edges() {
            pts.push(bb_move(x, e).map_err(|e| e.to_string())?);
        }
        for p in pts {
            ensure(is_vertex(&p).map_err(|e| e.to_string())?.is_vertex, || format!("rejected {p:?}"))?;
            accepted += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let mut midpoints = 0;
    while midpoints < 20 {
        let n = rng.gen_range(5..=9);
        let (a, b) = (SepPoint::tour(&random_tour(n, &mut rng)).unwrap(), SepPoint::tour(&random_tour(n, &mut rng)).unwrap());
        if a == b {
            continue;
        }
        let mid = SepPoint::new(
            n,
            complete_edges(n)
                .into_iter()
                .map(|e| (e, (a.weight(e) + b.weight(e)) / int(2)))
                .filter(|(_, w)| *w > int(0)),
        )
        .unwrap();
        let report = is_vertex(&mid).map_err(|e| e.to_string())?;
        ensure(report.feasible && !report.is_vertex, || format!("midpoint accepted: {mid:?}"))?;
        midpoints += 1;
    }
    for t in 0..50 {
        let x = &ancestors[rng.gen_range(0..ancestors.len())];
        let (y, _) = random_successor(x, 6, &mut rng).map_err(|e| e.to_string())?;
        let mut perm: Vec<usize> = (0..y.node_count()).collect();
        perm.shuffle(&mut rng);
        let y = y.permute(&perm);
        let d = contract_to_ancestor(&y).map_err(|e| e.to_string())?;
        ensure(point_form(&d.ancestor) == point_form(x), || format!("trip {t}: wrong ancestor"))?;
        let back = expand(&d.ancestor, &d.one_edges, &d.counts).map_err(|e| e.to_string())?;
        ensure(canonical_form(&support_graph(&back)) == point_form(&y), || format!("trip {t}: not isomorphic"))?;
    }
    Ok(format!("{accepted} vertices accepted, 20 tour midpoints rejected, 50 round trips"))
}

fn brute_tsp(c: &CostMatrix) -> Rational {
    let n = c.node_count();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best: Option<Rational> = None;
    permute(&mut rest, 0, &mut |p| {
        let mut len = c.get(0, p[0]) + c.get(p[p.len() - 1], 0);
        for w in p.windows(2) {
            len += c.get(w[0], w[1]);
        }
        if best.as_ref().map_or(true, |b| len < *b) {
            best = Some(len);
        }
    });
    best.unwrap()
}

fn permute(a: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == a.len() {
        return f(a);
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, f);
        a.swap(k, i);
    }
}

/// Shortest-path closure of random positive rationals.
fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> CostMatrix {
    let mut d = vec![vec![int(0); n]; n];
    for e in complete_edges(n) {
        let w = frac(rng.gen_range(1..100), rng.gen_range(1..10));
        d[e.lo()][e.hi()] = w.clone();
        d[e.hi()][e.lo()] = w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    CostMatrix::from_fn(n, |e| d[e.lo()][e.hi()].clone())
}

fn tsp_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    let mut cases = Vec::new();
    for n in 3..=8 {
        for _ in 0..50 {
            cases.push(random_metric(n, &mut rng));
        }
    }
    par::map(&cases, |c| {
        let (fast, tour) = tsp_exact(c).map_err(|e| e.to_string())?;
        let slow = brute_tsp(c);
        let n = c.node_count();
        let len: Rational = (0..n).map(|i| c.get(tour[i], tour[(i + 1) % n]).clone()).sum();
        ensure(fast == slow && len == fast, || format!("n={n}: {fast} vs {slow}"))
    })
    .into_iter()
    .collect::<Result<Vec<_>, String>>()?;
    Ok(format!("{} metrics, n = 3..8", cases.len()))
}

/// Moves one rational string by ±1/1000.
fn nudge_rational(v: &mut Value, rng: &mut ChaCha8Rng) {
    let r = gapbound::rational::parse(v.as_str().unwrap()).unwrap();
    let delta = if rng.gen_bool(0.5) { frac(1, 1000) } else { frac(-1, 1000) };
    *v = Value::String(gapbound::rational::format(&(r + delta)));
}

fn tamper(cert: &GapBoundCertificate, rng: &mut ChaCha8Rng) -> (String, String) {
    let mut v = serde_json::to_value(cert).unwrap();
    let field = ["point", "costs", "walk_mu", "walk_mult", "value", "gap_plus", "constants", "c_star", "bound", "n", "format_version"]
        [rng.gen_range(0..11)];
    match field {
        "point" | "costs" | "constants" => {
            let arr = v[field].as_array_mut().unwrap();
            let i = rng.gen_range(0..arr.len());
            nudge_rational(&mut arr[i]["value"], rng);
        }
        "walk_mu" => {
            let arr = v["walks"].as_array_mut().unwrap();
            let i = rng.gen_range(0..arr.len());
            nudge_rational(&mut arr[i]["mu"], rng);
        }
        "walk_mult" => {
            let arr = v["walks"].as_array_mut().unwrap();
            let i = rng.gen_range(0..arr.len());
            let edges = arr[i]["walk"].as_array_mut().unwrap();
            let j = rng.gen_range(0..edges.len());
            let m = edges[j][2].as_u64().unwrap();
            let m = if m == 1 || (m == 2 && rng.gen_bool(0.5)) { m + 1 } else { m - 1 };
            edges[j][2] = Value::from(m);
        }
        "n" | "format_version" => {
            let k = v[field].as_u64().unwrap();
            v[field] = Value::from(if rng.gen_bool(0.5) { k + 1 } else { k - 1 });
        }
        _ => nudge_rational(&mut v[field], rng),
    }
    (field.to_string(), v.to_string())
}

fn certificate_integrity() -> Outcome {
    let mut certs = Vec::new();
    for x in fixtures::all_ancestors() {
        certs.extend(gbe(&x, &alpha(), 10).map_err(|e| e.to_string())?.certificates);
    }
    for (i, c) in certs.iter().enumerate() {
        verify_certificate(c).map_err(|e| format!("certificate {i} rejected: {e}"))?;
        let back = GapBoundCertificate::from_json(&c.to_json()).map_err(|e| e.to_string())?;
        ensure(back == *c, || format!("certificate {i} changes through JSON"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    let mut resealed = 0;
    for t in 0..100 {
        let cert = &certs[rng.gen_range(0..certs.len())];
        let (field, json) = tamper(cert, &mut rng);
        let reseal = rng.gen_bool(0.5);
        let rejected = match GapBoundCertificate::from_json(&json) {
            Err(_) => true,
            Ok(c) => {
                let c = if reseal {
                    resealed += 1;
                    c.sealed()
                } else {
                    c
                };
                verify_certificate(&c).is_err()
            }
        };
        ensure(rejected, || format!("tamper {t} on {field} (resealed: {reseal}) accepted"))?;
    }
    Ok(format!("{} certificates accepted, 100 tampered variants rejected ({resealed} resealed)", certs.len()))
}

const K5_SAMPLE: &str = include_str!("data/k5_sample.txt");

fn source_data_absent() -> Outcome {
    for k in [5, 6] {
        ensure(family_source(k) == FamilySource::Absent, || format!("k={k} has a built-in source"))?;
        ensure(builtin_ancestors(k).map_err(|e| e.to_string())?.is_none(), || format!("k={k} fabricated ancestors"))?;
    }
    let pts = parse_vertices(K5_SAMPLE).map_err(|e| e.to_string())?;
    let ancestors = filter_ancestors(&pts, 5);
    ensure(!ancestors.is_empty(), || "sample file has no k=5 ancestor".into())?;
    let (report, _) = run_family(5, &ancestors, &alpha(), 10).map_err(|e| e.to_string())?;
    ensure(report.rows.len() == ancestors.len(), || "report is missing rows".into())?;
    Ok(format!(
        "k=5,6 absent without files; supplied sample: {} ancestors, max bound {}, {} over 4/3",
        report.ancestors,
        report.max_bound.unwrap(),
        report.failures
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("k=3 family", family_k3),
        ("k=4 family", family_k4),
        ("formulation equivalence", formulation_equivalence),
        ("walk oracle", walk_oracle),
        ("C invariance", c_invariance),
        ("successor soundness", successor_soundness),
        ("vertex machinery", vertex_machinery),
        ("tsp brute force", tsp_brute_force),
        ("certificate integrity", certificate_integrity),
        ("source data absent", source_data_absent),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
