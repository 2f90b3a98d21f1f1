use gallery_core::bench::{generate, Class, GenSpec};
use gallery_core::engine::{solve, CutSet, SolveConfig};
use gallery_core::facets::{oracle, Partition};
use gallery_core::geom::number::{int, to_f64};
use gallery_core::geom::point::orient_exact;
use gallery_core::geom::{orient, parse_polygon, sees, visibility_polygon, write_polygon, Point};
use gallery_core::lp::{optimality_violations, solve_ip, solve_lp, Arithmetic, LpModel, RowKind};
use gallery_core::model::VisibilityMatrix;
use proptest::prelude::*;

/// Covering matrices with every row nonempty, as `rows[w][g]`.
fn matrices(max_g: usize, max_w: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (2..=max_g, 1..=max_w).prop_flat_map(|(ng, nw)| {
        prop::collection::vec((prop::collection::vec(any::<bool>(), ng), 0..ng), nw).prop_map(|rows| {
            rows.into_iter()
                .map(|(mut r, fix)| {
                    r[fix] = true;
                    r
                })
                .collect()
        })
    })
}

fn lp_of(rows: &[Vec<bool>]) -> LpModel {
    let mut m = LpModel::new();
    for g in 0..rows[0].len() {
        m.add_column(g as u64, &[]).unwrap();
    }
    for (w, r) in rows.iter().enumerate() {
        let e: Vec<(u64, u32)> = (0..r.len()).filter(|&g| r[g]).map(|g| (g as u64, 1)).collect();
        m.add_row(w as u64, RowKind::Witness, &e, 1).unwrap();
    }
    m
}

fn min_cover(m: &VisibilityMatrix) -> u32 {
    oracle::feasible_covers(m).iter().map(|x| x.count_ones()).min().unwrap()
}

fn dot(coefs: &[u32], x: u32) -> u32 {
    coefs.iter().enumerate().filter(|(g, _)| x >> g & 1 == 1).map(|(_, &c)| c).sum()
}

fn classes() -> impl Strategy<Value = Class> {
    prop::sample::select(Class::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orientation_is_antisymmetric(a in (-50i64..50, -50i64..50), b in (-50i64..50, -50i64..50), c in (-50i64..50, -50i64..50)) {
        let (a, b, c) = (Point::from_ints(a.0, a.1), Point::from_ints(b.0, b.1), Point::from_ints(c.0, c.1));
        prop_assert_eq!(orient(&a, &b, &c), orient(&b, &a, &c).reverse());
        prop_assert_eq!(orient(&a, &b, &c), orient(&b, &c, &a));
        prop_assert_eq!(orient(&a, &b, &c), orient_exact(&a, &b, &c));
    }

    #[test]
    fn exact_lp_optimum_carries_a_certificate(rows in matrices(10, 10)) {
        let m = lp_of(&rows);
        let exact = solve_lp(&m, Arithmetic::Exact).unwrap();
        prop_assert!(exact.is_optimal());
        prop_assert_eq!(optimality_violations(&m, &exact), Vec::<String>::new());
        let float = solve_lp(&m, Arithmetic::Float).unwrap();
        prop_assert!((float.objective_approx - to_f64(&exact.objective)).abs() < 1e-6);
    }

    #[test]
    fn lp_bound_sits_below_the_cover_optimum(rows in matrices(10, 10)) {
        let m = lp_of(&rows);
        let vm = VisibilityMatrix::from_rows(rows);
        let best = min_cover(&vm);
        let lp = solve_lp(&m, Arithmetic::Exact).unwrap();
        prop_assert!(lp.objective <= int(best as i64));
        let ip = solve_ip(&m, Arithmetic::Exact, None).unwrap();
        prop_assert_eq!(ip.objective, int(best as i64));
    }

    #[test]
    fn set_cover_inequalities_hold_for_every_cover(rows in matrices(10, 10), pick in prop::collection::vec(any::<prop::sample::Index>(), 3..=4)) {
        let m = VisibilityMatrix::from_rows(rows);
        let mut s: Vec<usize> = pick.iter().map(|i| i.index(m.num_witnesses())).collect();
        s.sort_unstable();
        s.dedup();
        let coefs = Partition::of(&m, &s).coefficients(m.num_guards());
        for x in oracle::feasible_covers(&m) {
            prop_assert!(dot(&coefs, x) >= 2 || s.len() < 2, "cover {x:b} violates the cut of {s:?}");
        }
    }

    #[test]
    fn edge_cover_inequalities_hold_when_no_guard_sees_three(rows in matrices(10, 10), pick in prop::collection::vec(any::<prop::sample::Index>(), 3..=7)) {
        let m = VisibilityMatrix::from_rows(rows);
        let mut wbar: Vec<usize> = pick.iter().map(|i| i.index(m.num_witnesses())).collect();
        wbar.sort_unstable();
        wbar.dedup();
        let sees_three = (0..m.num_guards()).any(|g| wbar.iter().filter(|&&w| m.sees(w, g)).count() > 2);
        prop_assume!(wbar.len() % 2 == 1 && !sees_three);
        let (coefs, rhs) = oracle::ec_inequality(&m, &wbar);
        for x in oracle::feasible_covers(&m) {
            prop_assert!(dot(&coefs, x) >= rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generated_instances_are_valid(class in classes(), size in 20usize..60, seed in 0u64..1000) {
        let p = generate(&GenSpec::new(class, size, seed)).unwrap();
        let n = p.vertex_count() as f64;
        prop_assert!((n - size as f64).abs() <= 0.1 * size as f64 + 1.0, "{class} {size}: {n}");
        prop_assert_eq!(parse_polygon(&write_polygon(&p)).unwrap(), p.clone());
        prop_assert_eq!(generate(&GenSpec::new(class, size, seed)).unwrap(), p);
    }

    #[test]
    fn visibility_regions_agree_with_segment_tests(class in classes(), seed in 0u64..1000, apex in any::<prop::sample::Index>()) {
        let p = generate(&GenSpec::new(class, 24, seed)).unwrap();
        let verts: Vec<Point> = p.vertices().cloned().collect();
        let a = &verts[apex.index(verts.len())];
        let v = visibility_polygon(a, &p).unwrap();
        prop_assert!(v.region.area() <= p.area());
        for q in &verts {
            prop_assert_eq!(v.contains(q), sees(a, q, &p).unwrap());
        }
        for (s, t) in p.edges() {
            let mid = s.midpoint(t);
            prop_assert_eq!(v.contains(&mid), sees(a, &mid, &p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn engine_bounds_are_monotone_and_consistent(class in classes(), seed in 0u64..1000, cuts in prop::sample::select(CutSet::ALL.to_vec())) {
        let p = generate(&GenSpec::new(class, 20, seed)).unwrap();
        let cfg = SolveConfig { cuts, time_limit: 20.0, ..SolveConfig::default() };
        let s = solve(&p, &cfg).unwrap();
        let ev = &s.log.events;
        for w in ev.windows(2) {
            prop_assert!(w[0].lb <= w[1].lb);
            if let (Some(a), Some(b)) = (w[0].ub, w[1].ub) {
                prop_assert!(b <= a);
            }
            prop_assert!(w[0].t <= w[1].t);
        }
        if let Some(ub) = s.state.upper_bound {
            prop_assert!(s.state.lower_bound <= ub);
            prop_assert_eq!(s.state.incumbent.len() as u32, ub);
            // the incumbent guards see every vertex
            for q in p.vertices() {
                let mut seen = false;
                for g in &s.state.incumbent {
                    seen |= sees(g, q, &p).unwrap();
                }
                prop_assert!(seen);
            }
        }
        prop_assert!(s.state.lower_bound >= 1);
    }
}
