//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p geochrom --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use geochrom::catalog::{convex_clique, CatalogSource, OnDemandCatalogs};
use geochrom::geometry::{orientation, Orientation, Point};
use geochrom::hom::is_pseudo_coloring;
use geochrom::{
    chromatic_number, convex_crossing_rule, crossing_structure, enumerate_clique_structures, figure_graph,
    find_geometric_hom, find_noncollapsing_hom, geochromatic_lower_bound, geochromatic_number, is_general_position,
    is_geometric_hom, lift_dist2, lift_independent, lift_independent_noncollapsing, lift_small_chi,
    pseudo_geochromatic_number, random_geometric_graph, segments_cross, separation_family, star_crossing, CrossingView,
    Figure, GeometricGraph, LiftReport,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest clique size searched when computing X for random instances.
const RANDOM_MAX_N: usize = 6;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    if spent <= limit {
        Ok(())
    } else {
        Err(format!("took {spent:.2?}, limit {limit:?}"))
    }
}

fn pt(x: i64, y: i64) -> Point {
    Point::new(x, y).unwrap()
}

fn lands_in_convex_clique(g: &GeometricGraph, report: &LiftReport) -> bool {
    is_geometric_hom(g, &convex_clique(report.target_size), &report.beta)
}

fn instance(seed: u64, min_dist: usize) -> GeometricGraph {
    let vertices = 6 + (seed % 7) as usize;
    let p = if min_dist == 2 { 0.22 } else { 0.28 };
    random_geometric_graph(vertices, p, min_dist, seed).expect("random instance")
}

fn convex_rule_matches_geometry() -> Verdict {
    let start = Instant::now();
    let mut pairs = 0;
    let mut mismatches = 0;
    for n in 4..=8 {
        let k = convex_clique(n);
        let pos = k.positions();
        let edges = k.edges();
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[i + 1..] {
                if e.shares_vertex(f) {
                    continue;
                }
                pairs += 1;
                let rule = convex_crossing_rule(n, (e.lo() + 1, e.hi() + 1), (f.lo() + 1, f.hi() + 1)).unwrap();
                let geo = segments_cross(&pos[e.lo()], &pos[e.hi()], &pos[f.lo()], &pos[f.hi()]).unwrap();
                mismatches += usize::from(rule != geo);
            }
        }
    }
    let time = within(Duration::from_secs(1), start);
    verdict(
        mismatches == 0 && time.is_ok(),
        format!("{mismatches} mismatches over {pairs} disjoint pairs, n = 4..8 {}", time.err().unwrap_or_default()),
    )
}

fn triangular_hull_quadruples_do_not_cross() -> Verdict {
    let start = Instant::now();
    let grid: Vec<Point> = (0..7).flat_map(|x| (0..7).map(move |y| pt(x, y))).collect();
    let inside = |p: &Point, a: &Point, b: &Point, c: &Point| {
        let o = orientation(a, b, c);
        orientation(a, b, p) == o && orientation(b, c, p) == o && orientation(c, a, p) == o
    };
    let (mut triangular, mut crossings, mut convex_without_one) = (0usize, 0usize, 0usize);
    let m = grid.len();
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                if orientation(&grid[a], &grid[b], &grid[c]) == Orientation::Collinear {
                    continue;
                }
                for d in (c + 1)..m {
                    let q = [&grid[a], &grid[b], &grid[c], &grid[d]];
                    if !is_general_position(&[q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()]) {
                        continue;
                    }
                    let tri = (0..4).any(|i| {
                        let o: Vec<&Point> = (0..4).filter(|&j| j != i).map(|j| q[j]).collect();
                        inside(q[i], o[0], o[1], o[2])
                    });
                    let count = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)]
                        .iter()
                        .filter(|&&(i, j, k, l)| segments_cross(q[i], q[j], q[k], q[l]).unwrap())
                        .count();
                    if tri {
                        triangular += 1;
                        crossings += count;
                    } else if count != 1 {
                        convex_without_one += 1;
                    }
                }
            }
        }
    }
    let time = within(Duration::from_secs(10), start);
    verdict(
        crossings == 0 && convex_without_one == 0 && time.is_ok(),
        format!(
            "{triangular} triangular-hull quadruples, {crossings} crossings; {convex_without_one} convex quadruples without exactly one {}",
            time.err().unwrap_or_default()
        ),
    )
}

fn figure1_drawings_are_distinct() -> Verdict {
    let start = Instant::now();
    let left = figure_graph(Figure::Figure1Left);
    let right = figure_graph(Figure::Figure1Right);
    let forward = find_geometric_hom(&left, &right);
    let backward = find_geometric_hom(&right, &left);
    let all_crossed = |g: &GeometricGraph| {
        (0..6).any(|v| {
            g.graph().neighbors(v).iter().all(|&w| {
                g.crossings()
                    .iter()
                    .any(|c| c.first == geochrom::Edge::new(v, w) || c.second == geochrom::Edge::new(v, w))
            })
        })
    };
    let (lc, rc) = (left.crossings().len(), right.crossings().len());
    let time = within(Duration::from_secs(30), start);
    verdict(
        forward.is_none()
            && backward.is_none()
            && all_crossed(&left)
            && !all_crossed(&right)
            && rc > lc
            && time.is_ok(),
        format!(
            "hom left->right {}, right->left {}; fully crossed vertex left {} right {}; crossings {lc} vs {rc} {}",
            forward.is_some(),
            backward.is_some(),
            all_crossed(&left),
            all_crossed(&right),
            time.err().unwrap_or_default()
        ),
    )
}

fn figure6_numbers(catalogs: &OnDemandCatalogs) -> Verdict {
    let start = Instant::now();
    let g = figure_graph(Figure::Figure6);
    let (px, coloring) = pseudo_geochromatic_number(&g);
    let x = geochromatic_number(&g, 7, catalogs).unwrap();
    let lower = geochromatic_lower_bound(&g);
    let chi = chromatic_number(g.graph()).0;
    let time = within(Duration::from_secs(60), start);
    verdict(
        px == 5 && x.value() == Some(6) && lower == 6 && chi == 3 && is_pseudo_coloring(&g, &coloring) && time.is_ok(),
        format!("px {px}, x {:?}, lower bound {lower}, chi {chi} {}", x.value(), time.err().unwrap_or_default()),
    )
}

fn star_family(catalogs: &OnDemandCatalogs) -> Verdict {
    let k4 = convex_clique(4);
    let mut bad = Vec::new();
    for k in 1..=10 {
        let (g, map) = star_crossing(k).unwrap();
        let x = geochromatic_number(&g, 7, catalogs).unwrap().value();
        if g.crossings().len() != k || !is_geometric_hom(&g, &k4, &map) || x != Some(4) {
            bad.push(format!("k={k} crossings {} x {x:?}", g.crossings().len()));
        }
    }
    verdict(bad.is_empty(), format!("k = 1..10, failures: {bad:?}"))
}

fn dist2_lifts(catalogs: &OnDemandCatalogs) -> Verdict {
    let start = Instant::now();
    let (mut bad, mut resolved, mut crossed) = (Vec::new(), 0, 0);
    for seed in 0..200 {
        let g = instance(seed, 2);
        let (chi, alpha) = chromatic_number(g.graph());
        crossed += usize::from(!g.crossings().is_empty());
        match lift_dist2(&g, &alpha) {
            Ok(r) if r.target_size == chi + 2 && lands_in_convex_clique(&g, &r) => {}
            other => bad.push(format!("seed {seed}: {:?}", other.err())),
        }
        if let Some(x) = geochromatic_number(&g, RANDOM_MAX_N, catalogs).unwrap().value() {
            resolved += 1;
            if x > chi + 2 {
                bad.push(format!("seed {seed}: x {x} > chi + 2 = {}", chi + 2));
            }
        }
    }
    let time = within(Duration::from_secs(300), start);
    verdict(
        bad.is_empty() && time.is_ok(),
        format!(
            "200 instances ({crossed} with crossings), x resolved on {resolved}, failures {bad:?} {}",
            time.err().unwrap_or_default()
        ),
    )
}

fn noncollapsing_lifts() -> Verdict {
    let (mut bad, mut lifted) = (Vec::new(), 0);
    for seed in 0..200 {
        let g = instance(seed, 1);
        let chi = chromatic_number(g.graph()).0;
        if let Some(alpha) = [chi, chi + 1].into_iter().find_map(|n| find_noncollapsing_hom(&g, n)) {
            lifted += 1;
            match lift_independent_noncollapsing(&g, &alpha) {
                Ok(r) if r.target_size == 2 * alpha.color_count() && lands_in_convex_clique(&g, &r) => {}
                other => bad.push(format!("seed {seed}: {:?}", other.err())),
            }
        }
    }
    verdict(bad.is_empty(), format!("{lifted} of 200 instances had a non-collapsing colouring, failures {bad:?}"))
}

fn three_n_lifts() -> Verdict {
    let mut bad = Vec::new();
    for seed in 0..200 {
        let g = instance(seed, 1);
        let (chi, alpha) = chromatic_number(g.graph());
        match lift_independent(&g, &alpha) {
            Ok(r) if r.target_size == 3 * chi && lands_in_convex_clique(&g, &r) => {}
            other => bad.push(format!("seed {seed}: {:?}", other.err())),
        }
    }
    verdict(bad.is_empty(), format!("200 instances, failures {bad:?}"))
}

fn small_chi_lifts(catalogs: &OnDemandCatalogs) -> Verdict {
    let (mut bad, mut used, mut resolved, mut seed) = (Vec::new(), 0, 0, 0u64);
    while used < 200 {
        let g = instance(seed, 1);
        seed += 1;
        let (chi, alpha) = chromatic_number(g.graph());
        if !(2..=3).contains(&chi) {
            continue;
        }
        used += 1;
        match lift_small_chi(&g, &alpha) {
            Ok(r) if r.target_size == 2 * chi && lands_in_convex_clique(&g, &r) => {}
            other => bad.push(format!("seed {}: {:?}", seed - 1, other.err())),
        }
        if let Some(x) = geochromatic_number(&g, RANDOM_MAX_N, catalogs).unwrap().value() {
            resolved += 1;
            if x > 2 * chi {
                bad.push(format!("seed {}: x {x} > 2 chi", seed - 1));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("200 instances with chi in {{2,3}} (seeds 0..{seed}), x resolved on {resolved}, failures {bad:?}"),
    )
}

fn sandwich(catalogs: &OnDemandCatalogs) -> Verdict {
    let mut graphs: Vec<GeometricGraph> = Figure::ALL.iter().map(|&f| figure_graph(f)).collect();
    graphs.extend((1..=10).map(|k| star_crossing(k).unwrap().0));
    graphs.extend((0..150).map(|s| instance(s, (s % 3) as usize)));
    graphs.extend((1..=2).map(|n| separation_family(n).unwrap()));
    let (mut bad, mut resolved) = (Vec::new(), 0);
    for (i, g) in graphs.iter().enumerate() {
        let chi = chromatic_number(g.graph()).0;
        let px = pseudo_geochromatic_number(g).0;
        let lower = geochromatic_lower_bound(g);
        let crossed = !g.crossings().is_empty();
        let mut ok = chi <= px && px <= lower && (!crossed || px >= 4);
        if let Some(x) = geochromatic_number(g, RANDOM_MAX_N, catalogs).unwrap().value() {
            resolved += 1;
            ok &= px <= x && lower <= x && (!crossed || x >= 4);
        }
        if !ok {
            bad.push(i);
        }
    }
    verdict(bad.is_empty(), format!("{} instances, x resolved on {resolved}, violations at {bad:?}", graphs.len()))
}

fn separation_gap(catalogs: &OnDemandCatalogs) -> Verdict {
    let start = Instant::now();
    let mut report = Vec::new();
    let mut pass = true;
    for n in 1..=2 {
        let g = separation_family(n).unwrap();
        let px = pseudo_geochromatic_number(&g).0;
        let x = geochromatic_number(&g, 7, catalogs).unwrap().value();
        match x {
            Some(x) => {
                pass &= x == px + n;
                report.push(format!("n={n}: x {x} px {px} gap {}", x as i64 - px as i64));
            }
            None => {
                pass = false;
                report.push(format!("n={n}: x unresolved up to 7, px {px}"));
            }
        }
    }
    let time = within(Duration::from_secs(600), start);
    verdict(
        pass && time.is_ok(),
        format!("exact branch, expected gap n; {} {}", report.join("; "), time.err().unwrap_or_default()),
    )
}

fn rational_cross(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let (rx, ry) = (r(b.0 - a.0), r(b.1 - a.1));
    let (sx, sy) = (r(d.0 - c.0), r(d.1 - c.1));
    let (qx, qy) = (r(c.0 - a.0), r(c.1 - a.1));
    let denom = &rx * &sy - &ry * &sx;
    if denom == r(0) {
        return false;
    }
    let t = (&qx * &sy - &qy * &sx) / &denom;
    let u = (&qx * &ry - &qy * &rx) / &denom;
    let open = |v: &BigRational| *v > r(0) && *v < r(1);
    open(&t) && open(&u)
}

fn crossing_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    let mut crossing = 0;
    let mut done = 0;
    while done < 100_000 {
        // small coordinates so collinear and touching cases are common
        let span = if done % 2 == 0 { 12 } else { 1_000_000 };
        let mut draw = || (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        let q = [draw(), draw(), draw(), draw()];
        if (0..4).any(|i| (i + 1..4).any(|j| q[i] == q[j])) {
            continue;
        }
        let p: Vec<Point> = q.iter().map(|&(x, y)| pt(x, y)).collect();
        let got = segments_cross(&p[0], &p[1], &p[2], &p[3]).unwrap();
        let want = rational_cross(q[0], q[1], q[2], q[3]);
        mismatches += usize::from(got != want);
        crossing += usize::from(want);
        done += 1;
    }
    verdict(mismatches == 0, format!("{mismatches} mismatches over {done} quadruples ({crossing} crossing)"))
}

fn catalog_sanity(catalogs: &OnDemandCatalogs) -> Verdict {
    let start = Instant::now();
    let k3 = enumerate_clique_structures(3, 2).unwrap().len();
    let k4 = enumerate_clique_structures(4, 2).unwrap().len();
    let mut pass = k3 == 1 && k4 == 2;
    let mut detail = format!("K3 {k3}, K4 {k4}");
    for n in 5..=6 {
        let cat = catalogs.catalog(n).unwrap();
        let next = enumerate_clique_structures(n, cat.grid_bound + 1).unwrap();
        let convex = cat.contains(&crossing_structure(&convex_clique(n)));
        pass &= cat.converged && next.len() == cat.len() && convex;
        detail.push_str(&format!(
            ", K{n} {} (grid {}; grid {} gives {}; convex present {convex})",
            cat.len(),
            cat.grid_bound,
            next.grid_bound,
            next.len()
        ));
    }
    let k6 = catalogs.catalog(6).unwrap();
    let both =
        [Figure::Figure1Left, Figure::Figure1Right].iter().all(|&f| k6.contains(&crossing_structure(&figure_graph(f))));
    pass &= both;
    let time = within(Duration::from_secs(900), start);
    verdict(
        pass && time.is_ok(),
        format!("{detail}, figure drawings in K6 catalog {both} {}", time.err().unwrap_or_default()),
    )
}

fn main() -> ExitCode {
    let catalogs = OnDemandCatalogs::new(7);
    let criteria: Vec<Criterion> = vec![
        ("convex crossing rule equals geometry", Box::new(convex_rule_matches_geometry)),
        ("triangular-hull quadruples never cross", Box::new(triangular_hull_quadruples_do_not_cross)),
        ("figure 1 drawings are homomorphically distinct", Box::new(figure1_drawings_are_distinct)),
        ("figure 6 numbers", Box::new(|| figure6_numbers(&catalogs))),
        ("star family", Box::new(|| star_family(&catalogs))),
        ("distance-2 lift", Box::new(|| dist2_lifts(&catalogs))),
        ("non-collapsing 2n lift", Box::new(noncollapsing_lifts)),
        ("independent 3n lift", Box::new(three_n_lifts)),
        ("small-chi 2n lift", Box::new(|| small_chi_lifts(&catalogs))),
        ("sandwich", Box::new(|| sandwich(&catalogs))),
        ("separation family gap", Box::new(|| separation_gap(&catalogs))),
        ("crossing predicate oracle", Box::new(crossing_oracle)),
        ("catalog sanity", Box::new(|| catalog_sanity(&catalogs))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!v.pass);
        println!("{tag} {:>2} {name}: {} [{:.2?}]", i + 1, v.detail, start.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
