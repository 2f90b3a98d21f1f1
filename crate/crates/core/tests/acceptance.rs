//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line with the
//! measured numbers and asserts the criterion.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use gallery_core::bench::{generate, Class, GenSpec};
use gallery_core::engine::{solve, CutSet, Mode, Reason, SolveConfig};
use gallery_core::facets::{
    check_ec_facet, check_sc_facet, check_trivial_facets, is_full_dimensional, oracle, Partition,
};
use gallery_core::geom::number::{int, ratio, to_f64};
use gallery_core::geom::{kernel, overlay, sees, visibility_polygon, CellKind, Location, Point, Polygon, Rational};
use gallery_core::instances::{self, Fixture};
use gallery_core::lp::{optimality_violations, solve_ip, solve_lp, Arithmetic, LpSolution};
use gallery_core::model::{CutConstraint, Model, PointSet, VisibilityMatrix};
use gallery_core::separation::{ec_certificate, separate_ec, separate_sc};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CIRCULANT_BUDGET: Duration = Duration::from_secs(1);
const SC_BUDGET: Duration = Duration::from_secs(1);
const EC_BUDGET: Duration = Duration::from_secs(5);
const GEOMETRY_BUDGET: Duration = Duration::from_secs(30);
const DESK_INSTANCES: usize = 200;
const EXTRA_GUARDS: usize = 10;
const KOCH_SIZE: usize = 60;
const KOCH_SEEDS: std::ops::RangeInclusive<u64> = 1..=10;
const KOCH_LIMIT_S: f64 = 60.0;
const SIMPLE_SIZES: [usize; 2] = [30, 60];
const SIMPLE_SEEDS: std::ops::RangeInclusive<u64> = 1..=5;
const SAMPLED_PAIRS: usize = 1000;
const SAMPLED_POINTS: usize = 1000;

fn report(id: u32, name: &str, pass: bool, detail: &str, elapsed: Duration) {
    println!(
        "[{}] criterion {id}: {name}: {detail} ({:.3} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn fixture_model(f: &Fixture) -> Model {
    Model::with_sets(
        f.polygon.clone(),
        PointSet::from_points(f.guards.clone()),
        PointSet::from_points(f.witnesses.clone()),
    )
    .unwrap()
}

fn exact_lp(m: &Model) -> LpSolution {
    let lpm = m.lp_model().unwrap();
    let sol = solve_lp(&lpm, Arithmetic::Exact).unwrap();
    assert!(sol.is_optimal());
    assert_eq!(optimality_violations(&lpm, &sol), Vec::<String>::new());
    sol
}

fn zero() -> Rational {
    Rational::zero()
}

/// Random points of `poly` on a grid of pitch `1/den`.
fn random_points(poly: &Polygon, count: usize, den: i64, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let (lo, hi) = poly.bbox();
    let (x0, y0) = (to_f64(lo.x()).floor() as i64, to_f64(lo.y()).floor() as i64);
    let (x1, y1) = (to_f64(hi.x()).ceil() as i64, to_f64(hi.y()).ceil() as i64);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = ratio(rng.gen_range(x0 * den..=x1 * den), den);
        let y = ratio(rng.gen_range(y0 * den..=y1 * den), den);
        let q = Point::new(x, y);
        if poly.contains(&q) {
            out.push(q);
        }
    }
    out
}

fn min_cover(m: &VisibilityMatrix) -> u32 {
    oracle::feasible_covers(m).iter().map(|x| x.count_ones()).min().unwrap()
}

#[test]
fn criterion_1_circulant_lp_values() {
    let t = Instant::now();
    let ring = exact_lp(&fixture_model(&instances::triangle_ring()));
    let pin = exact_lp(&fixture_model(&instances::pinwheel()));
    let elapsed = t.elapsed();
    let halves = ring.primal.iter().all(|v| *v == ratio(1, 2));
    let pass = ring.objective == ratio(3, 2) && halves && pin.objective == ratio(4, 3) && elapsed < CIRCULANT_BUDGET;
    report(
        1,
        "circulant LP values",
        pass,
        &format!(
            "k=3 optimum {} (all guards 1/2: {halves}), k=4 optimum {}",
            ring.objective, pin.objective
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_2_sc3_cut_lifts_to_two() {
    let t = Instant::now();
    let mut m = fixture_model(&instances::triangle_ring());
    let before = exact_lp(&m);
    let cuts = separate_sc(&m, &before.primal, 3, &zero()).new_cuts;
    let found = cuts.len();
    for c in cuts {
        m.add_cut(c);
    }
    let after = exact_lp(&m);
    let ip = solve_ip(&m.lp_model().unwrap(), Arithmetic::Exact, None).unwrap();
    let brute = min_cover(m.matrix());
    let cfg = SolveConfig { mode: Mode::Ip, cuts: CutSet::Sc3, ..SolveConfig::default() };
    let engine = solve(&instances::triangle_ring().polygon, &cfg).unwrap();
    let elapsed = t.elapsed();
    let pass = before.objective == ratio(3, 2)
        && found > 0
        && after.objective == int(2)
        && ip.objective == int(2)
        && brute == 2
        && engine.state.upper_bound == Some(2)
        && engine.state.lower_bound == 2
        && elapsed < SC_BUDGET;
    report(
        2,
        "SC3 cut effect",
        pass,
        &format!(
            "LP {} -> {} with {found} cut(s), IP {}, brute force {brute}, IP mode on the polygon {:?}",
            before.objective, after.objective, ip.objective, engine.state.upper_bound
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_3_ec_cut_lifts_odd_cycles() {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for (f, k) in [(instances::pentagon_ring(), 5), (instances::triangle_ring(), 3)] {
        let mut m = fixture_model(&f);
        let certificate = ec_certificate(&f.witnesses, &m).unwrap();
        let before = exact_lp(&m);
        let cuts = separate_ec(&m, &before.primal, &zero()).unwrap().new_cuts;
        let found = cuts.len();
        for c in cuts {
            m.add_cut(c);
        }
        let after = exact_lp(&m);
        let rhs = int(k as i64 + 1) / int(2);
        pass &= certificate <= 2 && before.objective == ratio(k, 2) && found > 0 && after.objective >= rhs;
        lines.push(format!(
            "{k}-cycle: certificate {certificate}, LP {} -> {}",
            before.objective, after.objective
        ));
    }
    let elapsed = t.elapsed();
    pass &= elapsed < EC_BUDGET;
    report(3, "EC cut effect", pass, &lines.join("; "), elapsed);
    assert!(pass);
}

/// A small polygon with up to `max_g` guards and 12 witnesses: either a
/// circulant fixture with a few random points added, or a generated polygon
/// with random guards and witnesses.
fn desk_instance(rng: &mut ChaCha8Rng, max_g: usize) -> Option<Model> {
    let (polygon, mut guards, mut witnesses) = match rng.gen_range(0..6) {
        0 | 1 => {
            let f = if rng.gen_bool(0.5) { instances::triangle_ring() } else { instances::pentagon_ring() };
            let extra_g = rng.gen_range(0..=3);
            let extra_w = rng.gen_range(0..=2);
            let mut g = f.guards.clone();
            g.extend(random_points(&f.polygon, extra_g, 2, rng));
            let mut w = f.witnesses.clone();
            w.extend(random_points(&f.polygon, extra_w, 2, rng));
            (f.polygon, g, w)
        }
        _ => {
            let class = Class::ALL[rng.gen_range(0..Class::ALL.len())];
            let polygon = generate(&GenSpec::new(class, rng.gen_range(14..24), rng.gen())).ok()?;
            let verts: Vec<Point> = polygon.vertices().cloned().collect();
            let mut g = Vec::new();
            for _ in 0..rng.gen_range(3..=max_g) {
                if rng.gen_bool(0.5) {
                    g.push(verts[rng.gen_range(0..verts.len())].clone());
                } else {
                    g.extend(random_points(&polygon, 1, 2, rng));
                }
            }
            let w = random_points(&polygon, rng.gen_range(3..=12), 2, rng);
            (polygon, g, w)
        }
    };
    guards.truncate(max_g);
    witnesses.retain(|w| guards.iter().any(|g| sees(g, w, &polygon).unwrap()));
    if witnesses.len() < 3 {
        return None;
    }
    Model::with_sets(polygon, PointSet::from_points(guards), PointSet::from_points(witnesses)).ok()
}

/// Cuts that some binary cover of `m` violates.
fn violated_cuts(m: &Model) -> usize {
    let covers = oracle::feasible_covers(m.matrix());
    (0..m.cuts().len())
        .filter(|&ci| {
            let coefs: Vec<u32> = (0..m.guards().len()).map(|g| m.cut_coef(ci, g)).collect();
            covers.iter().any(|&x| {
                let lhs: u32 = (0..coefs.len()).filter(|g| x >> g & 1 == 1).map(|g| coefs[g]).sum();
                lhs < m.cuts()[ci].rhs
            })
        })
        .count()
}

#[test]
fn criterion_4_cuts_are_valid() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut instances_used, mut emitted, mut violations, mut violations_after) = (0, 0, 0, 0);
    let mut kinds = [0usize; 2];
    while instances_used < DESK_INSTANCES {
        let Some(mut m) = desk_instance(&mut rng, oracle::MAX_GUARDS - EXTRA_GUARDS) else {
            continue;
        };
        instances_used += 1;
        let ng = m.guards().len();
        let lp = exact_lp(&m);
        let mut points = vec![lp.primal.clone(), vec![ratio(1, 2); ng], vec![ratio(1, 3); ng]];
        points.push((0..ng).map(|_| ratio(rng.gen_range(0..=3), 3)).collect());
        points.push((0..ng).map(|g| if g < 5 { ratio(1, 2) } else { zero() }).collect());
        let mut cuts: Vec<CutConstraint> = Vec::new();
        for x in &points {
            cuts.extend(separate_sc(&m, x, 3, &zero()).new_cuts);
            cuts.extend(separate_sc(&m, x, 4, &zero()).new_cuts);
            cuts.extend(separate_ec(&m, x, &zero()).unwrap().new_cuts);
        }
        for c in cuts {
            let kind = c.kind;
            if m.add_cut(c) {
                emitted += 1;
                kinds[usize::from(kind == gallery_core::model::CutKind::Ec)] += 1;
            }
        }
        violations += violated_cuts(&m);
        let extra = random_points(&m.polygon().clone(), EXTRA_GUARDS, 3, &mut rng);
        for g in extra {
            m.add_guard(g).unwrap();
        }
        violations_after += violated_cuts(&m);
    }
    let elapsed = t.elapsed();
    let pass = violations == 0 && violations_after == 0 && kinds[0] > 0 && kinds[1] > 0;
    report(
        4,
        "cut validity",
        pass,
        &format!(
            "{instances_used} instances, {emitted} cuts ({} SC, {} EC), {violations} violated, \
             {violations_after} violated after {EXTRA_GUARDS} extra guards",
            kinds[0], kinds[1]
        ),
        elapsed,
    );
    assert!(pass);
}

#[derive(Default)]
struct Agreement {
    agree: usize,
    total: usize,
}

impl Agreement {
    fn add(&mut self, ok: bool) {
        self.total += 1;
        self.agree += usize::from(ok);
    }

    fn full(&self) -> bool {
        self.total > 0 && self.agree == self.total
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_5_facet_checkers_match_the_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut full_dim, mut trivial, mut sc, mut ec) =
        (Agreement::default(), Agreement::default(), Agreement::default(), Agreement::default());
    let mut ec_false_positives = 0;
    let mut instances_used = 0;
    let mut full_instances = 0;
    while instances_used < DESK_INSTANCES {
        let ng = rng.gen_range(4..=9);
        let nw = rng.gen_range(3..=7);
        let p = rng.gen_range(0.3..0.7);
        let rows: Vec<Vec<bool>> = (0..nw).map(|_| (0..ng).map(|_| rng.gen_bool(p)).collect()).collect();
        if rows.iter().any(|r| !r.contains(&true)) {
            continue;
        }
        let m = VisibilityMatrix::from_rows(rows);
        instances_used += 1;
        let fd = is_full_dimensional(&m);
        full_dim.add(fd == (oracle::polytope_dimension(&m) == ng as i64));
        if !fd {
            // facet conditions are stated for full-dimensional polytopes
            continue;
        }
        full_instances += 1;
        let r = check_trivial_facets(&m);
        for g in 0..ng {
            trivial.add(r.lower[g] == oracle::lower_bound_is_facet(&m, g));
            trivial.add(r.upper[g] == oracle::upper_bound_is_facet(&m, g));
        }
        for w in 0..nw {
            trivial.add(r.witness[w] == oracle::is_facet(&m, &oracle::witness_coefficients(&m, w), 1));
        }
        for k in [3, 4] {
            for s in subsets(nw, k) {
                if let Ok(v) = check_sc_facet(&m, &s) {
                    let coefs = Partition::of(&m, &s).coefficients(ng);
                    sc.add(v.facet == oracle::is_facet(&m, &coefs, 2));
                }
            }
        }
        for k in [3, 5] {
            for s in subsets(nw, k) {
                let valid = (0..ng).all(|g| s.iter().filter(|&&w| m.sees(w, g)).count() <= 2);
                if !valid {
                    continue;
                }
                if let Ok(v) = check_ec_facet(&m, &s) {
                    let (coefs, rhs) = oracle::ec_inequality(&m, &s);
                    let o = oracle::is_facet(&m, &coefs, rhs);
                    ec.add(v.facet == o);
                    ec_false_positives += usize::from(v.facet && !o);
                }
            }
        }
    }
    let elapsed = t.elapsed();
    let pass = full_dim.full() && trivial.full() && sc.full() && ec.full();
    report(
        5,
        "facet oracle agreement",
        pass,
        &format!(
            "{instances_used} instances ({full_instances} full-dimensional); full dimension {}/{}, \
             trivial {}/{}, SC {}/{}, EC {}/{} ({ec_false_positives} false positives, {} missed facets)",
            full_dim.agree,
            full_dim.total,
            trivial.agree,
            trivial.total,
            sc.agree,
            sc.total,
            ec.agree,
            ec.total,
            ec.total - ec.agree - ec_false_positives
        ),
        elapsed,
    );
    assert!(pass);
}

struct Run {
    class: Class,
    size: usize,
    seed: u64,
    cuts: CutSet,
    vertices: usize,
    holes: usize,
    lb: u32,
    ub: Option<u32>,
    reason: Option<Reason>,
    time_s: f64,
    lp_solves: usize,
    duality_violations: Vec<String>,
}

impl Run {
    fn solved(&self) -> bool {
        self.ub == Some(self.lb)
    }
}

/// The end-to-end solve matrix, shared by the engine, Chvátal and duality
/// criteria. Every exact LP certificate is checked along the way.
fn matrix() -> &'static [Run] {
    static RUNS: OnceLock<Vec<Run>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut specs = Vec::new();
        for seed in KOCH_SEEDS {
            for cuts in [CutSet::Sc3Ec, CutSet::None] {
                specs.push((Class::Koch, KOCH_SIZE, seed, cuts));
            }
        }
        for size in SIMPLE_SIZES {
            for seed in SIMPLE_SEEDS {
                specs.push((Class::Simple, size, seed, CutSet::Sc3Ec));
            }
        }
        specs
            .into_iter()
            .map(|(class, size, seed, cuts)| {
                let poly = generate(&GenSpec::new(class, size, seed)).unwrap();
                let cfg = SolveConfig {
                    cuts,
                    time_limit: KOCH_LIMIT_S,
                    check_duality: true,
                    ..SolveConfig::default()
                };
                let s = solve(&poly, &cfg).unwrap();
                Run {
                    class,
                    size,
                    seed,
                    cuts,
                    vertices: poly.vertex_count(),
                    holes: poly.holes().len(),
                    lb: s.state.lower_bound,
                    ub: s.state.upper_bound,
                    reason: s.state.reason,
                    time_s: s.state.elapsed,
                    lp_solves: s.state.lp_solves,
                    duality_violations: s.state.duality_violations,
                }
            })
            .collect()
    })
}

#[test]
fn criterion_6_koch_instances_close() {
    let t = Instant::now();
    let runs = matrix();
    let koch = |cuts: CutSet| -> Vec<&Run> {
        runs.iter().filter(|r| r.class == Class::Koch && r.cuts == cuts).collect()
    };
    let with = koch(CutSet::Sc3Ec);
    let without = koch(CutSet::None);
    for r in with.iter().chain(&without) {
        println!(
            "  koch-{} seed {} {}: lb {} ub {:?} {:?} in {:.2} s",
            r.size, r.seed, r.cuts, r.lb, r.ub, r.reason, r.time_s
        );
    }
    let solved_with = with.iter().filter(|r| r.solved() && r.time_s <= KOCH_LIMIT_S).count();
    let solved_without = without.iter().filter(|r| r.solved() && r.time_s <= KOCH_LIMIT_S).count();
    let slowest = with.iter().map(|r| r.time_s).fold(0.0, f64::max);
    let pass = solved_with == with.len() && solved_without <= solved_with;
    report(
        6,
        "engine end-to-end",
        pass,
        &format!(
            "SC3+EC solved {solved_with}/{} at gap 0 (slowest {slowest:.2} s), no cuts solved {solved_without}/{}",
            with.len(),
            without.len()
        ),
        t.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_7_chvatal_bound() {
    let t = Instant::now();
    let runs = matrix();
    let hole_free: Vec<&Run> = runs.iter().filter(|r| r.holes == 0 && r.solved()).collect();
    let violations: Vec<String> = hole_free
        .iter()
        .filter(|r| r.ub.unwrap() as usize > r.vertices / 3)
        .map(|r| format!("{}-{} seed {}", r.class, r.size, r.seed))
        .collect();
    let simple = hole_free.iter().filter(|r| r.class == Class::Simple).count();
    let pass = violations.is_empty() && simple > 0;
    report(
        7,
        "Chvátal bound",
        pass,
        &format!(
            "{} solved hole-free instances ({simple} simple, {} koch), {} above floor(n/3) {violations:?}",
            hole_free.len(),
            hole_free.len() - simple,
            violations.len()
        ),
        t.elapsed(),
    );
    assert!(pass);
}

fn geometry_polygons() -> Vec<(String, Polygon)> {
    let mut v: Vec<(String, Polygon)> = instances::all()
        .into_iter()
        .map(|f| (f.name.to_string(), f.polygon))
        .collect();
    v.push(("l-shape".into(), instances::l_shape()));
    for class in Class::ALL {
        v.push((format!("{class}-40"), generate(&GenSpec::new(class, 40, 1)).unwrap()));
    }
    v
}

#[test]
fn criterion_8_geometry_suite() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut pairs, mut pair_mismatch, mut points, mut weight_mismatch) = (0, 0, 0, 0);
    for (_, poly) in geometry_polygons() {
        let mut apexes: Vec<Point> = poly.vertices().cloned().collect();
        apexes.truncate(10);
        apexes.extend(random_points(&poly, 20 - apexes.len(), 2, &mut rng));
        let per_apex = SAMPLED_PAIRS / apexes.len();
        let vis: Vec<Polygon> = apexes
            .iter()
            .map(|a| visibility_polygon(a, &poly).unwrap().region)
            .collect();
        for (a, v) in apexes.iter().zip(&vis) {
            for q in random_points(&poly, per_apex, 3, &mut rng) {
                pairs += 1;
                let inside = v.locate(&q) != Location::Outside;
                pair_mismatch += usize::from(inside != sees(a, &q, &poly).unwrap());
            }
        }
        let weights: Vec<Rational> = (0..6).map(|i| ratio(i + 1, 3)).collect();
        let weighted: Vec<(Polygon, Rational)> = vis.iter().cloned().zip(weights.iter().cloned()).collect();
        let arr = overlay(&weighted, &poly);
        for q in random_points(&poly, SAMPLED_POINTS, 4, &mut rng) {
            points += 1;
            let Some(cell) = arr.locate(&q) else {
                weight_mismatch += 1;
                continue;
            };
            let direct = weighted
                .iter()
                .filter(|(r, _)| match cell.kind {
                    CellKind::Face => r.locate(&q) == Location::Inside,
                    _ => r.contains(&q),
                })
                .fold(int(0), |acc, (_, w)| acc + w);
            weight_mismatch += usize::from(cell.weight != direct);
        }
    }
    let star = kernel(&instances::pinwheel().polygon).is_some_and(|k| !k.is_degenerate());
    let ring_empty = kernel(&instances::triangle_ring().polygon).is_none();
    let elapsed = t.elapsed();
    let pass = pair_mismatch == 0 && weight_mismatch == 0 && star && ring_empty && elapsed < GEOMETRY_BUDGET;
    report(
        8,
        "geometry suite",
        pass,
        &format!(
            "{pairs} visibility pairs ({pair_mismatch} mismatches), {points} overlay points \
             ({weight_mismatch} mismatches), 4-circulant kernel non-empty: {star}, 3-circulant kernel empty: {ring_empty}"
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_9_duality_certificates() {
    let t = Instant::now();
    let mut checked = 0;
    let mut failures: Vec<String> = Vec::new();
    for f in instances::all() {
        let mut m = fixture_model(&f);
        for _ in 0..3 {
            let lpm = m.lp_model().unwrap();
            let sol = solve_lp(&lpm, Arithmetic::Exact).unwrap();
            checked += 1;
            failures.extend(optimality_violations(&lpm, &sol));
            let mut cuts = separate_sc(&m, &sol.primal, 3, &zero()).new_cuts;
            cuts.extend(separate_ec(&m, &sol.primal, &zero()).unwrap().new_cuts);
            let mut added = false;
            for c in cuts {
                added |= m.add_cut(c);
            }
            if !added {
                break;
            }
        }
    }
    let runs = matrix();
    for r in runs {
        checked += r.lp_solves;
        failures.extend(r.duality_violations.iter().cloned());
    }
    let pass = failures.is_empty();
    report(
        9,
        "duality invariants",
        pass,
        &format!("{checked} exact LP optima checked, {} certificate failures", failures.len()),
        t.elapsed(),
    );
    assert!(pass, "{failures:?}");
}
