//! Separation: new witnesses from under-covered cells, new guards from
//! over-packed cells, and SC / EC cutting planes.

mod cuts;

use num_traits::{One, Zero};

use crate::geom::arrangement::{overlay_regions, Arrangement, Cell, CellKind};
use crate::geom::{GeomError, Point, Polygon, Rational};
use crate::lp::LpSolution;
use crate::model::{CutConstraint, Model};

pub use cuts::{candidate_pool, ec_certificate, separate_ec, separate_sc};

/// Most points a single primal or dual separation call returns.
pub const MAX_POINTS: usize = 100;

#[derive(Debug, Clone, Default)]
pub struct SeparationResult {
    pub new_witnesses: Vec<Point>,
    pub new_guards: Vec<Point>,
    pub new_cuts: Vec<CutConstraint>,
    pub found: bool,
    /// Smallest coverage (primal) or largest load (dual) over the polygon.
    pub extremum: Option<Rational>,
}

/// Overlay of the visibility polygons of `points` inside the model polygon.
fn visibility_overlay(model: &Model, points: &[&Point]) -> Result<Arrangement, GeomError> {
    let vis = model.visibility_many(points)?;
    let regions: Vec<&Polygon> = vis.iter().map(|v| &v.region).collect();
    Ok(overlay_regions(&regions, model.polygon()))
}

/// Representative points of the cells whose weight is within `tol` of
/// `target`, faces first, then edges, then vertices.
fn extremal_points(arr: &Arrangement, target: &Rational, tol: &Rational) -> Vec<Point> {
    let mut picked: Vec<&Cell> = arr
        .cells()
        .iter()
        .filter(|c| {
            let d = &c.weight - target;
            -tol <= d && d <= *tol
        })
        .collect();
    picked.sort_by_key(|c| match c.kind {
        CellKind::Face => 0,
        CellKind::Edge => 1,
        CellKind::Vertex => 2,
    });
    picked.into_iter().map(|c| c.point.clone()).collect()
}

/// Finds points of the polygon covered less than one by `x` (indexed by
/// guard id). Returns every minimum-coverage cell up to [`MAX_POINTS`].
pub fn primal_separate(model: &Model, x: &[Rational], tol: &Rational) -> Result<SeparationResult, GeomError> {
    let support: Vec<usize> = (0..x.len()).filter(|&g| x[g] > Rational::zero()).collect();
    let pts: Vec<&Point> = support.iter().map(|&g| model.guards().get(g)).collect();
    let mut arr = visibility_overlay(model, &pts)?;
    arr.reweigh(|members| {
        members
            .iter()
            .fold(Rational::zero(), |acc, &i| acc + &x[support[i]])
    });
    let Some(min) = arr.min_weight().cloned() else {
        return Ok(SeparationResult::default());
    };
    let mut res = SeparationResult {
        extremum: Some(min.clone()),
        ..Default::default()
    };
    if min < Rational::one() - tol {
        res.new_witnesses = extremal_points(&arr, &min, tol)
            .into_iter()
            .filter(|p| !model.witnesses().contains(p))
            .take(MAX_POINTS)
            .collect();
        res.found = !res.new_witnesses.is_empty();
    }
    Ok(res)
}

/// Finds points whose dual load exceeds one: the total dual value of the
/// witness rows they see plus their cut coefficients times the cut duals.
/// Returns every maximum-load cell up to [`MAX_POINTS`].
pub fn dual_separate(model: &Model, sol: &LpSolution, tol: &Rational) -> Result<SeparationResult, GeomError> {
    let nw = model.witnesses().len();
    let mut region_pts: Vec<&Point> = Vec::new();
    let mut region_y: Vec<Rational> = Vec::new();
    for w in 0..nw {
        if sol.dual[w] > Rational::zero() {
            region_pts.push(model.witnesses().get(w));
            region_y.push(sol.dual[w].clone());
        }
    }
    // regions of each active cut's witnesses, with the cut's dual
    let mut active_cuts: Vec<(&CutConstraint, Rational, Vec<usize>)> = Vec::new();
    for (ci, c) in model.cuts().iter().enumerate() {
        let yc = &sol.dual[nw + ci];
        if *yc <= Rational::zero() {
            continue;
        }
        let idx = c
            .witnesses
            .iter()
            .map(|w| match region_pts.iter().position(|p| *p == w) {
                Some(i) => i,
                None => {
                    region_pts.push(w);
                    region_y.push(Rational::zero());
                    region_pts.len() - 1
                }
            })
            .collect();
        active_cuts.push((c, yc.clone(), idx));
    }
    let mut arr = visibility_overlay(model, &region_pts)?;
    arr.reweigh(|members| {
        let mut w = members
            .iter()
            .fold(Rational::zero(), |acc, &i| acc + &region_y[i]);
        for (c, yc, idx) in &active_cuts {
            let seen = idx.iter().filter(|i| members.contains(i)).count();
            let coef = c.coefficient_for(seen);
            if coef > 0 {
                w += yc * Rational::from_integer(coef.into());
            }
        }
        w
    });
    let Some(max) = arr.max_weight().cloned() else {
        return Ok(SeparationResult::default());
    };
    let mut res = SeparationResult {
        extremum: Some(max.clone()),
        ..Default::default()
    };
    if max > Rational::one() + tol {
        res.new_guards = extremal_points(&arr, &max, tol)
            .into_iter()
            .filter(|p| !model.guards().contains(p))
            .take(MAX_POINTS)
            .collect();
        res.found = !res.new_guards.is_empty();
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::number::{int, ratio};
    use crate::geom::sees;
    use crate::instances;
    use crate::lp::{solve_lp, Arithmetic};
    use crate::model::PointSet;

    fn fixture_model(f: &instances::Fixture) -> Model {
        Model::with_sets(
            f.polygon.clone(),
            PointSet::from_points(f.guards.clone()),
            PointSet::from_points(f.witnesses.clone()),
        )
        .unwrap()
    }

    #[test]
    fn full_cover_has_no_violation() {
        let f = instances::square(4);
        let m = Model::new(f.polygon);
        let x = vec![int(1), int(0), int(0), int(0)];
        let r = primal_separate(&m, &x, &int(0)).unwrap();
        assert!(!r.found);
        assert_eq!(r.extremum, Some(int(1)));
    }

    #[test]
    fn reflex_guard_leaves_pocket_uncovered() {
        // a guard at a convex corner of the L does not see the far arm
        let m = Model::new(instances::l_shape());
        let g = m.guards().id_of(&Point::from_ints(4, 0)).unwrap();
        let mut x = vec![int(0); m.guards().len()];
        x[g] = int(1);
        let r = primal_separate(&m, &x, &int(0)).unwrap();
        assert!(r.found);
        for q in &r.new_witnesses {
            assert!(!sees(&Point::from_ints(4, 0), q, m.polygon()).unwrap());
        }
    }

    #[test]
    fn pocket_tip_is_under_covered() {
        let f = instances::pinwheel_with_pocket();
        let m = fixture_model(&f);
        let x = vec![ratio(1, 3); 4];
        let r = primal_separate(&m, &x, &int(0)).unwrap();
        assert!(r.found);
        let min = r.extremum.clone().unwrap();
        assert!(min < int(1));
        for q in &r.new_witnesses {
            let cover = f
                .guards
                .iter()
                .filter(|g| sees(g, q, &f.polygon).unwrap())
                .fold(int(0), |a, _| a + ratio(1, 3));
            assert_eq!(cover, min);
        }
        let tip = instances::pocket_tip();
        let cover = f
            .guards
            .iter()
            .filter(|g| sees(g, &tip, &f.polygon).unwrap())
            .fold(int(0), |a, _| a + ratio(1, 3));
        assert_eq!(cover, ratio(2, 3));
    }

    #[test]
    fn kernel_point_overpacks_pinwheel() {
        let f = instances::pinwheel();
        let m = fixture_model(&f);
        let lp = solve_lp(&m.lp_model().unwrap(), Arithmetic::Exact).unwrap();
        assert_eq!(lp.objective, ratio(4, 3));
        let r = dual_separate(&m, &lp, &int(0)).unwrap();
        assert!(r.found);
        assert_eq!(r.extremum, Some(ratio(4, 3)));
        for g in &r.new_guards {
            let seen = f.witnesses.iter().filter(|w| sees(g, w, &f.polygon).unwrap()).count();
            assert_eq!(seen, 4);
        }
    }

    #[test]
    fn single_witness_packing_is_tight() {
        let f = instances::square(4);
        let m = Model::new(f.polygon);
        let lp = solve_lp(&m.lp_model().unwrap(), Arithmetic::Exact).unwrap();
        let r = dual_separate(&m, &lp, &int(0)).unwrap();
        assert!(!r.found);
        assert_eq!(r.extremum, Some(int(1)));
    }
}
