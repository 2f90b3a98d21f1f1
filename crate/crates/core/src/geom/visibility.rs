//! Point-to-point visibility and visibility polygons.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::number::Rational;
use super::point::{
    cmp_angle, line_intersection, on_segment, orient, segment_intersection,
    segments_cross_properly, Point, SegmentIntersection,
};
use super::polygon::{Location, Polygon};
use super::GeomError;

/// The region visible from `apex`: a hole-free polygon, star-shaped around
/// the apex, plus the segments seen only by grazing along the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityPolygon {
    pub apex: Point,
    pub region: Polygon,
    /// Far ends of sight lines that leave `region`, each seen along its whole
    /// length from the apex.
    pub antennae: Vec<Point>,
}

impl VisibilityPolygon {
    pub fn ring(&self) -> &[Point] {
        self.region.outer()
    }

    pub fn contains(&self, q: &Point) -> bool {
        self.region.contains(q) || self.antennae.iter().any(|t| on_segment(q, &self.apex, t))
    }
}

/// Whether the closed segment `ab` lies in `poly`. Contact with the boundary
/// does not block sight.
pub fn sees(a: &Point, b: &Point, poly: &Polygon) -> Result<bool, GeomError> {
    for p in [a, b] {
        if !poly.contains(p) {
            return Err(GeomError::PointOutside(p.clone()));
        }
    }
    Ok(sees_unchecked(a, b, poly))
}

/// As [`sees`], with both endpoints known to lie in the polygon.
pub fn sees_unchecked(a: &Point, b: &Point, poly: &Polygon) -> bool {
    if a == b {
        return true;
    }
    let mut touches: Vec<Point> = Vec::new();
    for (c, d) in poly.edges() {
        if segments_cross_properly(a, b, c, d) {
            return false;
        }
        match segment_intersection(a, b, c, d) {
            SegmentIntersection::None => {}
            SegmentIntersection::Point(q) => touches.push(q),
            SegmentIntersection::Overlap(q, r) => {
                touches.push(q);
                touches.push(r);
            }
        }
    }
    if touches.is_empty() {
        // no boundary contact: the segment is entirely interior or exterior,
        // and its endpoints are in the polygon
        return true;
    }
    touches.push(a.clone());
    touches.push(b.clone());
    touches.sort();
    touches.dedup();
    touches
        .windows(2)
        .all(|w| poly.locate(&w[0].midpoint(&w[1])) != Location::Outside)
}

/// Nearest intersection of the ray from `origin` through `through` with the
/// given edges, ignoring edges that contain the origin. Returns the edge
/// index and the exact hit point.
pub(crate) fn first_hit<'a, I>(origin: &Point, through: &Point, edges: I) -> Option<(usize, Point)>
where
    I: IntoIterator<Item = (&'a Point, &'a Point)>,
{
    let (ox, oy) = origin.approx();
    let (tx, ty) = through.approx();
    let (dx, dy) = (tx - ox, ty - oy);
    let mut candidates: Vec<(f64, usize, &'a Point, &'a Point)> = Vec::new();
    for (i, (c, d)) in edges.into_iter().enumerate() {
        let oc = orient(origin, through, c);
        let od = orient(origin, through, d);
        if oc == od && oc != Ordering::Equal {
            continue;
        }
        // approximate ray parameter, used only for ordering candidates
        let (cx, cy) = c.approx();
        let (ex, ey) = d.approx();
        let (sx, sy) = (ex - cx, ey - cy);
        let denom = dx * sy - dy * sx;
        let approx_t = if oc == Ordering::Equal && od == Ordering::Equal {
            let tc = ((cx - ox) * dx + (cy - oy) * dy) / (dx * dx + dy * dy);
            let td = ((ex - ox) * dx + (ey - oy) * dy) / (dx * dx + dy * dy);
            tc.min(td)
        } else {
            ((cx - ox) * sy - (cy - oy) * sx) / denom
        };
        if approx_t.is_finite() && approx_t < -1e-6 {
            // well behind the origin; if it were exactly zero the edge
            // would contain the origin and be skipped anyway
            continue;
        }
        candidates.push((approx_t, i, c, d));
    }
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let dir = (through.x() - origin.x(), through.y() - origin.y());
    let mut best: Option<(Rational, usize, Point)> = None;
    let mut best_approx = f64::INFINITY;
    for (approx_t, i, c, d) in candidates {
        if approx_t.is_finite()
            && best_approx.is_finite()
            && approx_t > best_approx + 1e-7 * (1.0 + best_approx.abs())
        {
            break;
        }
        if on_segment(origin, c, d) {
            continue;
        }
        let Some(t) = ray_param(origin, &dir, c, d) else {
            continue;
        };
        if !t.is_positive() {
            continue;
        }
        let better = best.as_ref().map_or(true, |(bt, _, _)| t < *bt);
        if better {
            let hit = Point::new(origin.x() + &dir.0 * &t, origin.y() + &dir.1 * &t);
            best_approx = super::number::to_f64(&t);
            best = Some((t, i, hit));
        }
    }
    best.map(|(_, i, p)| (i, p))
}

/// Smallest parameter `t >= 0`... of `origin + t*dir` on segment `cd`, or
/// `None` when they do not meet.
fn ray_param(origin: &Point, dir: &(Rational, Rational), c: &Point, d: &Point) -> Option<Rational> {
    let s = (d.x() - c.x(), d.y() - c.y());
    let denom = &dir.0 * &s.1 - &dir.1 * &s.0;
    let qp = (c.x() - origin.x(), c.y() - origin.y());
    if denom.is_zero() {
        // parallel: only collinear overlap counts
        let cr = &qp.0 * &dir.1 - &qp.1 * &dir.0;
        if !cr.is_zero() {
            return None;
        }
        let len2 = &dir.0 * &dir.0 + &dir.1 * &dir.1;
        let tc = (&qp.0 * &dir.0 + &qp.1 * &dir.1) / &len2;
        let qd = (d.x() - origin.x(), d.y() - origin.y());
        let td = (&qd.0 * &dir.0 + &qd.1 * &dir.1) / &len2;
        let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
        if hi.is_negative() {
            return None;
        }
        return Some(if lo.is_negative() { Rational::zero() } else { lo });
    }
    let t = (&qp.0 * &s.1 - &qp.1 * &s.0) / &denom;
    let u = (&qp.0 * &dir.1 - &qp.1 * &dir.0) / &denom;
    if u.is_negative() || u > Rational::from_integer(1.into()) || t.is_negative() {
        return None;
    }
    Some(t)
}

/// Whether direction `origin -> q` points into the interior of `poly`
/// locally, for an origin on the boundary.
fn enters_interior(origin: &Point, q: &Point, poly: &Polygon) -> bool {
    for ring in poly.rings() {
        let n = ring.len();
        for i in 0..n {
            let cur = &ring[i];
            if cur == origin {
                let prev = &ring[(i + n - 1) % n];
                let next = &ring[(i + 1) % n];
                return if orient(prev, cur, next) == Ordering::Greater {
                    // convex corner: interior is the cone next -> prev
                    orient(cur, next, q) == Ordering::Greater
                        && orient(cur, q, prev) == Ordering::Greater
                } else {
                    let in_exterior = orient(cur, prev, q) != Ordering::Less
                        && orient(cur, q, next) != Ordering::Less;
                    !in_exterior
                };
            }
        }
    }
    for (c, d) in poly.edges() {
        if on_segment(origin, c, d) {
            return orient(c, d, q) == Ordering::Greater;
        }
    }
    true
}

pub fn visibility_polygon(p: &Point, poly: &Polygon) -> Result<VisibilityPolygon, GeomError> {
    let loc = poly.locate(p);
    if loc == Location::Outside {
        return Err(GeomError::PointOutside(p.clone()));
    }
    let mut events: Vec<&Point> = poly.vertices().filter(|v| *v != p).collect();
    events.sort_by(|a, b| cmp_angle(p, a, b));
    events.dedup_by(|a, b| cmp_angle(p, a, b) == Ordering::Equal);
    let edges: Vec<(&Point, &Point)> = poly.edges().collect();

    let k = events.len();
    let mut ring: Vec<Point> = Vec::with_capacity(2 * k);
    for i in 0..k {
        let e0 = events[i];
        let e1 = events[(i + 1) % k];
        let probe = sector_probe(p, e0, e1);
        if loc == Location::Boundary && !enters_interior(p, &probe, poly) {
            ring.push(p.clone());
            continue;
        }
        let (ei, _) = first_hit(p, &probe, edges.iter().copied())
            .expect("ray from a point inside a bounded polygon hits its boundary");
        let (c, d) = edges[ei];
        let a = line_intersection(c, d, p, e0).expect("sector edge not parallel to its rays");
        let b = line_intersection(c, d, p, e1).expect("sector edge not parallel to its rays");
        ring.push(a);
        ring.push(b);
    }
    let region = Polygon::new_unchecked(clean_ring(ring), Vec::new());
    let antennae = poly
        .vertices()
        .filter(|v| *v != p && !region.contains(v) && sees_unchecked(p, v, poly))
        .cloned()
        .collect();
    Ok(VisibilityPolygon {
        apex: p.clone(),
        region,
        antennae,
    })
}

/// A point strictly inside the counterclockwise angular sector from
/// direction `origin -> a` to direction `origin -> b`.
fn sector_probe(origin: &Point, a: &Point, b: &Point) -> Point {
    let v1 = (a.x() - origin.x(), a.y() - origin.y());
    let v2 = (b.x() - origin.x(), b.y() - origin.y());
    let cr = &v1.0 * &v2.1 - &v1.1 * &v2.0;
    let (dx, dy) = if cr.is_positive() {
        (&v1.0 + &v2.0, &v1.1 + &v2.1)
    } else if cr.is_negative() {
        (-(&v1.0 + &v2.0), -(&v1.1 + &v2.1))
    } else {
        let dot = &v1.0 * &v2.0 + &v1.1 * &v2.1;
        if dot.is_negative() {
            (-v1.1.clone(), v1.0.clone())
        } else {
            (-v1.0.clone(), -v1.1.clone())
        }
    };
    origin.offset(&dx, &dy)
}

/// Drops repeated and collinear vertices from a closed ring.
pub(crate) fn clean_ring(mut ring: Vec<Point>) -> Vec<Point> {
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let mut keep = vec![true; n];
        let mut changed = false;
        for i in 0..n {
            let next = &ring[(i + 1) % n];
            if ring[i] == *next {
                keep[(i + 1) % n] = false;
                changed = true;
                break;
            }
        }
        if !changed {
            for i in 0..n {
                let prev = &ring[(i + n - 1) % n];
                let next = &ring[(i + 1) % n];
                if orient(prev, &ring[i], next) == Ordering::Equal {
                    keep[i] = false;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return ring;
        }
        let mut idx = 0;
        ring.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
    }
}
