use std::collections::{HashSet, VecDeque};

use num_traits::{One, Zero};

use super::SeparationResult;
use crate::geom::arrangement::overlay_regions;
use crate::geom::number::{half, to_f64};
use crate::geom::{GeomError, Point, Polygon, Rational};
use crate::model::{CutConstraint, Model};

/// Most subsets examined per SC separation call.
pub const MAX_SUBSETS: usize = 1_000_000;
/// Most cuts returned per call.
pub const MAX_CUTS: usize = 50;
/// Most odd cycles examined per EC separation call.
const MAX_CYCLES: usize = 500;

fn is_fractional(v: &Rational, tol: &Rational) -> bool {
    *v > tol.clone() && *v < Rational::one() - tol
}

/// Witnesses whose covering row is tight under `x` and that some
/// fractional guard sees. Sorted by witness id.
pub fn candidate_pool(model: &Model, x: &[Rational], tol: &Rational) -> Vec<usize> {
    let m = model.matrix();
    (0..m.num_witnesses())
        .filter(|&w| {
            let seeing = m.guards_seeing(w);
            let cover = seeing.iter().fold(Rational::zero(), |a, &g| a + &x[g]);
            let d = cover - Rational::one();
            -tol <= d && d <= *tol && seeing.iter().any(|&g| is_fractional(&x[g], tol))
        })
        .collect()
}

/// Searches subsets of 3 (and, for `k = 4`, also 4) candidate witnesses
/// whose SC inequality `sum_g alpha_g x_g >= 2` is violated. Most violated
/// cuts come first.
pub fn separate_sc(model: &Model, x: &[Rational], k: usize, tol: &Rational) -> SeparationResult {
    assert!(k == 3 || k == 4, "subset size must be 3 or 4");
    let pool = candidate_pool(model, x, tol);
    let m = model.matrix();
    let support: Vec<usize> = (0..x.len()).filter(|&g| x[g] > Rational::zero()).collect();
    let xf: Vec<f64> = support.iter().map(|&g| to_f64(&x[g])).collect();
    let seen: Vec<Vec<bool>> = pool
        .iter()
        .map(|&w| support.iter().map(|&g| m.sees(w, g)).collect())
        .collect();
    let cutoff = 2.0 - to_f64(tol) + 1e-9;

    let mut examined = 0usize;
    let mut found: Vec<(Rational, Vec<usize>)> = Vec::new();
    let mut check = |subset: &[usize]| {
        let coef = |j: usize| {
            match subset.iter().filter(|&&i| seen[i][j]).count() {
                0 => 0u32,
                c if c == subset.len() => 2,
                _ => 1,
            }
        };
        let approx: f64 = (0..support.len()).map(|j| f64::from(coef(j)) * xf[j]).sum();
        if approx >= cutoff {
            return;
        }
        let lhs = (0..support.len()).fold(Rational::zero(), |a, j| {
            a + Rational::from_integer(coef(j).into()) * &x[support[j]]
        });
        if lhs < Rational::from_integer(2.into()) - tol {
            found.push((lhs, subset.to_vec()));
        }
    };
    let n = pool.len();
    'outer: for size in 3..=k {
        let mut idx: Vec<usize> = (0..size).collect();
        if n < size {
            break;
        }
        loop {
            if examined >= MAX_SUBSETS {
                break 'outer;
            }
            examined += 1;
            check(&idx);
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let new_cuts: Vec<CutConstraint> = found
        .into_iter()
        .take(MAX_CUTS)
        .map(|(_, s)| {
            let ws = s.iter().map(|&i| model.witnesses().get(pool[i]).clone()).collect();
            CutConstraint::sc(ws).expect("subset has at least three witnesses")
        })
        .collect();
    SeparationResult {
        found: !new_cuts.is_empty(),
        new_cuts,
        ..Default::default()
    }
}

/// Largest number of `witnesses` any single point of the polygon sees.
pub fn ec_certificate(witnesses: &[Point], model: &Model) -> Result<u32, GeomError> {
    let refs: Vec<&Point> = witnesses.iter().collect();
    let vis = model.visibility_many(&refs)?;
    let regions: Vec<&Polygon> = vis.iter().map(|v| &v.region).collect();
    let arr = overlay_regions(&regions, model.polygon());
    Ok(arr
        .max_weight()
        .map_or(0, |w| w.to_integer().try_into().unwrap_or(u32::MAX)))
}

/// Odd cycles of an undirected graph on `n` nodes, each as a sorted node
/// list. Finds, for every start node, the shortest odd cycles through it.
fn odd_cycles(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut branch = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    branch[v] = if u == s { v } else { branch[u] };
                    queue.push_back(v);
                }
            }
        }
        for a in 0..n {
            for &b in &adj[a] {
                if a < b && dist[a] != usize::MAX && dist[a] == dist[b] && dist[a] > 0 && branch[a] != branch[b] {
                    let mut cyc = vec![s];
                    for mut v in [a, b] {
                        while v != s {
                            cyc.push(v);
                            v = parent[v];
                        }
                    }
                    cyc.sort_unstable();
                    if seen.insert(cyc.clone()) {
                        out.push(cyc);
                        if out.len() >= MAX_CYCLES {
                            return out;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Searches for violated edge-cover cuts. Guards at one half that see
/// exactly two candidate witnesses form the edges of a graph on the pool;
/// each odd cycle whose witnesses no point sees three of at once yields a
/// cut `x(G ∩ V(W)) >= ceil(k/2)`.
pub fn separate_ec(model: &Model, x: &[Rational], tol: &Rational) -> Result<SeparationResult, GeomError> {
    let pool = candidate_pool(model, x, tol);
    let m = model.matrix();
    let h = half();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); pool.len()];
    for g in 0..x.len() {
        let d = &x[g] - &h;
        if d < -tol.clone() || d > *tol {
            continue;
        }
        let hit: Vec<usize> = (0..pool.len()).filter(|&i| m.sees(pool[i], g)).collect();
        if let [a, b] = hit[..] {
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut candidates: Vec<(Rational, Vec<usize>)> = Vec::new();
    for cyc in odd_cycles(pool.len(), &adj) {
        let rhs = Rational::from_integer(cyc.len().div_ceil(2).into());
        let lhs = (0..x.len())
            .filter(|&g| cyc.iter().any(|&i| m.sees(pool[i], g)))
            .fold(Rational::zero(), |a, g| a + &x[g]);
        if lhs < rhs.clone() - tol {
            candidates.push((lhs - rhs, cyc));
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0));
    let mut new_cuts = Vec::new();
    for (_, cyc) in candidates {
        if new_cuts.len() >= MAX_CUTS {
            break;
        }
        let ws: Vec<Point> = cyc.iter().map(|&i| model.witnesses().get(pool[i]).clone()).collect();
        let cert = ec_certificate(&ws, model)?;
        if cert <= 2 {
            new_cuts.push(CutConstraint::ec(ws, cert).expect("odd cycle of length at least three"));
        }
    }
    Ok(SeparationResult {
        found: !new_cuts.is_empty(),
        new_cuts,
        ..Default::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::number::{int, ratio};
    use crate::instances;
    use crate::lp::{solve_lp, Arithmetic};
    use crate::model::{CutKind, PointSet};

    fn fixture_model(f: &instances::Fixture) -> Model {
        Model::with_sets(
            f.polygon.clone(),
            PointSet::from_points(f.guards.clone()),
            PointSet::from_points(f.witnesses.clone()),
        )
        .unwrap()
    }

    #[test]
    fn triangle_ring_sc_cut() {
        let m = fixture_model(&instances::triangle_ring());
        let x = vec![half(); 3];
        assert_eq!(candidate_pool(&m, &x, &int(0)), vec![0, 1, 2]);
        let r = separate_sc(&m, &x, 3, &int(0));
        assert!(r.found);
        assert_eq!(r.new_cuts.len(), 1);
        assert_eq!(r.new_cuts[0].witnesses.len(), 3);
        assert_eq!(r.new_cuts[0].rhs, 2);
    }

    #[test]
    fn sc_cut_lifts_lp_bound() {
        let mut m = fixture_model(&instances::triangle_ring());
        let lp = solve_lp(&m.lp_model().unwrap(), Arithmetic::Exact).unwrap();
        assert_eq!(lp.objective, ratio(3, 2));
        let r = separate_sc(&m, &lp.primal, 3, &int(0));
        for c in r.new_cuts {
            m.add_cut(c);
        }
        let lp = solve_lp(&m.lp_model().unwrap(), Arithmetic::Exact).unwrap();
        assert_eq!(lp.objective, int(2));
        assert!(!separate_sc(&m, &lp.primal, 4, &int(0)).found);
    }

    #[test]
    fn sc4_includes_triples() {
        let m = fixture_model(&instances::pinwheel());
        let x = vec![ratio(1, 3); 4];
        let r3 = separate_sc(&m, &x, 3, &int(0));
        let r4 = separate_sc(&m, &x, 4, &int(0));
        assert!(r3.found);
        assert!(r4.new_cuts.len() >= r3.new_cuts.len());
        // the full set of four is the most violated: every guard sees three
        assert_eq!(r4.new_cuts[0].witnesses.len(), 4);
    }

    #[test]
    fn pentagon_ec_cut() {
        let m = fixture_model(&instances::pentagon_ring());
        let x = vec![half(); 5];
        let r = separate_ec(&m, &x, &int(0)).unwrap();
        assert!(r.found);
        let c = &r.new_cuts[0];
        assert_eq!(c.kind, CutKind::Ec);
        assert_eq!(c.witnesses.len(), 5);
        assert_eq!(c.rhs, 3);
        assert!(c.certificate.unwrap() <= 2);
    }

    #[test]
    fn pentagon_ec_lifts_lp_bound() {
        let mut m = fixture_model(&instances::pentagon_ring());
        let lp = solve_lp(&m.lp_model().unwrap(), Arithmetic::Exact).unwrap();
        assert_eq!(lp.objective, ratio(5, 2));
        for c in separate_ec(&m, &lp.primal, &int(0)).unwrap().new_cuts {
            m.add_cut(c);
        }
        let lp = solve_lp(&m.lp_model().unwrap(), Arithmetic::Exact).unwrap();
        assert_eq!(lp.objective, int(3));
    }

    #[test]
    fn odd_cycle_search() {
        // a 5-cycle with a chord making a triangle
        let adj = vec![vec![1, 4, 2], vec![0, 2], vec![1, 3, 0], vec![2, 4], vec![3, 0]];
        let cycles = odd_cycles(5, &adj);
        assert!(cycles.contains(&vec![0, 1, 2]));
        assert!(cycles.iter().all(|c| c.len() % 2 == 1));
        // bipartite graphs have none
        let square = vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![2, 0]];
        assert!(odd_cycles(4, &square).is_empty());
    }
}
