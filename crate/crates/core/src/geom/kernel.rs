//! Kernel of a polygon by half-plane clipping.

use std::cmp::Ordering;

use super::point::{line_intersection, orient, Point};
use super::polygon::Polygon;
use super::visibility::clean_ring;

/// A convex set given by its vertices in counterclockwise order. It may be
/// degenerate: a segment (two vertices) or a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    vertices: Vec<Point>,
}

impl Kernel {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            1 => &self.vertices[0] == p,
            2 => super::point::on_segment(p, &self.vertices[0], &self.vertices[1]),
            n => (0..n).all(|i| {
                orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) != Ordering::Less
            }),
        }
    }

    /// The kernel as a polygon, when it has positive area.
    pub fn to_polygon(&self) -> Option<Polygon> {
        if self.is_degenerate() {
            None
        } else {
            Some(Polygon::new_unchecked(self.vertices.clone(), Vec::new()))
        }
    }
}

/// Intersection of the closed inner half-planes of every edge of `poly`,
/// hole edges included. `None` means the polygon is not star-shaped.
pub fn kernel(poly: &Polygon) -> Option<Kernel> {
    let (lo, hi) = poly.bbox();
    let mut cur = vec![
        lo.clone(),
        Point::new(hi.x().clone(), lo.y().clone()),
        hi.clone(),
        Point::new(lo.x().clone(), hi.y().clone()),
    ];
    for (a, b) in poly.edges() {
        cur = clip(&cur, a, b);
        if cur.is_empty() {
            return None;
        }
    }
    let mut cur = clean_ring(cur);
    cur.dedup();
    if cur.len() > 1 && cur.first() == cur.last() {
        cur.pop();
    }
    if cur.len() == 2 && cur[0] == cur[1] {
        cur.pop();
    }
    Some(Kernel { vertices: cur })
}

/// Keeps the part of the closed convex chain `pts` on or left of line `ab`.
fn clip(pts: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    let n = pts.len();
    if n == 1 {
        return if orient(a, b, &pts[0]) != Ordering::Less {
            pts.to_vec()
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = &pts[i];
        let q = &pts[(i + 1) % n];
        let sp = orient(a, b, p);
        let sq = orient(a, b, q);
        if sp != Ordering::Less {
            out.push(p.clone());
        }
        let crosses = (sp == Ordering::Greater && sq == Ordering::Less)
            || (sp == Ordering::Less && sq == Ordering::Greater);
        if crosses {
            out.push(line_intersection(p, q, a, b).expect("crossing segments are not parallel"));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}
