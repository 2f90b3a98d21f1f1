use std::cmp::Ordering;

use super::number::{self, Rational};
use super::point::{orient, segment_intersection, Point, SegmentIntersection};
use super::GeomError;

/// Where a point lies relative to a closed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A polygonal region: counterclockwise outer ring and clockwise holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
}

impl Polygon {
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self, GeomError> {
        let poly = Polygon { outer, holes };
        poly.validate()?;
        Ok(poly)
    }

    /// Builds a hole-free polygon from a counterclockwise ring.
    pub fn simple(outer: Vec<Point>) -> Result<Self, GeomError> {
        Self::new(outer, Vec::new())
    }

    /// Skips validation. Callers guarantee the ring invariants.
    pub(crate) fn new_unchecked(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Self {
        Polygon { outer, holes }
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &[Point]> {
        std::iter::once(self.outer.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.rings().flat_map(|r| r.iter())
    }

    pub fn vertex_count(&self) -> usize {
        self.outer.len() + self.holes.iter().map(Vec::len).sum::<usize>()
    }

    /// All directed edges; interior lies to the left of each.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.rings().flat_map(ring_edges)
    }

    pub fn locate(&self, p: &Point) -> Location {
        match locate_in_ring(p, &self.outer) {
            Location::Outside => return Location::Outside,
            Location::Boundary => return Location::Boundary,
            Location::Inside => {}
        }
        for hole in &self.holes {
            match locate_in_ring(p, hole) {
                Location::Inside => return Location::Outside,
                Location::Boundary => return Location::Boundary,
                Location::Outside => {}
            }
        }
        Location::Inside
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) != Location::Outside
    }

    pub fn area(&self) -> Rational {
        self.rings().map(signed_area).sum()
    }

    pub fn bbox(&self) -> (Point, Point) {
        ring_bbox(&self.outer)
    }

    fn validate(&self) -> Result<(), GeomError> {
        for (ri, ring) in self.rings().enumerate() {
            if ring.len() < 3 {
                return Err(GeomError::TooFewVertices { ring: ri });
            }
            let n = ring.len();
            for i in 0..n {
                let prev = &ring[(i + n - 1) % n];
                let next = &ring[(i + 1) % n];
                if orient(prev, &ring[i], next) == Ordering::Equal {
                    return Err(GeomError::DegenerateVertex { ring: ri, index: i });
                }
            }
            let area = signed_area(ring);
            let ok = if ri == 0 {
                area > Rational::from_integer(0.into())
            } else {
                area < Rational::from_integer(0.into())
            };
            if !ok {
                return Err(GeomError::WrongOrientation { ring: ri });
            }
        }
        // pairwise edge test across all rings
        let edges: Vec<(usize, usize, &Point, &Point)> = self
            .rings()
            .enumerate()
            .flat_map(|(ri, ring)| {
                ring_edges(ring)
                    .enumerate()
                    .map(move |(ei, (a, b))| (ri, ei, a, b))
            })
            .collect();
        let ring_len: Vec<usize> = self.rings().map(|r| r.len()).collect();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let (ri, ei, a, b) = edges[i];
                let (rj, ej, c, d) = edges[j];
                let inter = segment_intersection(a, b, c, d);
                if inter == SegmentIntersection::None {
                    continue;
                }
                let adjacent = ri == rj && {
                    let n = ring_len[ri];
                    (ei + 1) % n == ej || (ej + 1) % n == ei
                };
                if adjacent {
                    // shared vertex only
                    if let SegmentIntersection::Point(_) = inter {
                        continue;
                    }
                }
                return Err(GeomError::NotSimple {
                    ring_a: ri,
                    edge_a: ei,
                    ring_b: rj,
                    edge_b: ej,
                });
            }
        }
        for (hi, hole) in self.holes.iter().enumerate() {
            if locate_in_ring(&hole[0], &self.outer) != Location::Inside {
                return Err(GeomError::HoleOutside { hole: hi });
            }
            for (hj, other) in self.holes.iter().enumerate() {
                if hi != hj && locate_in_ring(&hole[0], other) != Location::Outside {
                    return Err(GeomError::HolesOverlap { a: hi, b: hj });
                }
            }
        }
        Ok(())
    }
}

pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (&Point, &Point)> {
    let n = ring.len();
    (0..n).map(move |i| (&ring[i], &ring[(i + 1) % n]))
}

/// Twice-free shoelace area; positive for counterclockwise rings.
pub fn signed_area(ring: &[Point]) -> Rational {
    let n = ring.len();
    let mut acc = Rational::from_integer(0.into());
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        acc += a.x() * b.y() - b.x() * a.y();
    }
    acc / number::int(2)
}

pub fn ring_bbox(ring: &[Point]) -> (Point, Point) {
    let mut minx = ring[0].x().clone();
    let mut miny = ring[0].y().clone();
    let mut maxx = minx.clone();
    let mut maxy = miny.clone();
    for p in &ring[1..] {
        if p.x() < &minx {
            minx = p.x().clone();
        }
        if p.x() > &maxx {
            maxx = p.x().clone();
        }
        if p.y() < &miny {
            miny = p.y().clone();
        }
        if p.y() > &maxy {
            maxy = p.y().clone();
        }
    }
    (Point::new(minx, miny), Point::new(maxx, maxy))
}

/// Location of `p` relative to the closed region bounded by a simple ring
/// of either orientation.
pub fn locate_in_ring(p: &Point, ring: &[Point]) -> Location {
    let (px, py) = p.approx();
    let mut winding = 0i32;
    for (a, b) in ring_edges(ring) {
        let (ax, ay) = a.approx();
        let (bx, by) = b.approx();
        // quick reject: edge strictly above, below or left of p, with margin
        let eps = 1e-9 * (1.0 + px.abs().max(py.abs()).max(ax.abs()).max(bx.abs()).max(ay.abs()).max(by.abs()));
        if (ay > py + eps && by > py + eps) || (ay < py - eps && by < py - eps) {
            continue;
        }
        if ax < px - eps && bx < px - eps {
            continue;
        }
        let ay_le = a.cmp_y(p) != Ordering::Greater;
        let by_le = b.cmp_y(p) != Ordering::Greater;
        let o = orient(a, b, p);
        if o == Ordering::Equal && super::point::in_box(p, a, b) {
            return Location::Boundary;
        }
        if ay_le {
            if !by_le && o == Ordering::Greater {
                winding += 1;
            }
        } else if by_le && o == Ordering::Less {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(pts: &[(i64, i64)]) -> Vec<Point> {
        pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    #[test]
    fn square_locations() {
        let sq = Polygon::simple(ring(&[(0, 0), (4, 0), (4, 4), (0, 4)])).unwrap();
        assert_eq!(sq.locate(&Point::from_ints(2, 2)), Location::Inside);
        assert_eq!(sq.locate(&Point::from_ints(4, 2)), Location::Boundary);
        assert_eq!(sq.locate(&Point::from_ints(0, 0)), Location::Boundary);
        assert_eq!(sq.locate(&Point::from_ints(5, 2)), Location::Outside);
        assert_eq!(sq.locate(&Point::from_ints(2, -1)), Location::Outside);
        assert_eq!(sq.area(), number::int(16));
    }

    #[test]
    fn hole_locations() {
        let p = Polygon::new(
            ring(&[(0, 0), (10, 0), (10, 10), (0, 10)]),
            vec![ring(&[(3, 3), (3, 6), (6, 6), (6, 3)])],
        )
        .unwrap();
        assert_eq!(p.locate(&Point::from_ints(4, 4)), Location::Outside);
        assert_eq!(p.locate(&Point::from_ints(3, 4)), Location::Boundary);
        assert_eq!(p.locate(&Point::from_ints(1, 1)), Location::Inside);
        assert_eq!(p.area(), number::int(91));
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(matches!(
            Polygon::simple(ring(&[(0, 0), (4, 0), (4, 4), (2, -1), (0, 4)])),
            Err(GeomError::NotSimple { .. })
        ));
        assert!(matches!(
            Polygon::simple(ring(&[(0, 0), (0, 4), (4, 4), (4, 0)])),
            Err(GeomError::WrongOrientation { ring: 0 })
        ));
        assert!(matches!(
            Polygon::simple(ring(&[(0, 0), (2, 0), (4, 0), (4, 4)])),
            Err(GeomError::DegenerateVertex { .. })
        ));
        assert!(matches!(
            Polygon::simple(ring(&[(0, 0), (4, 0)])),
            Err(GeomError::TooFewVertices { .. })
        ));
        assert!(matches!(
            Polygon::new(
                ring(&[(0, 0), (4, 0), (4, 4), (0, 4)]),
                vec![ring(&[(5, 5), (5, 6), (6, 6), (6, 5)])]
            ),
            Err(GeomError::HoleOutside { hole: 0 })
        ));
        assert!(matches!(
            Polygon::new(
                ring(&[(0, 0), (10, 0), (10, 10), (0, 10)]),
                vec![
                    ring(&[(1, 1), (1, 8), (8, 8), (8, 1)]),
                    ring(&[(2, 2), (2, 3), (3, 3), (3, 2)])
                ]
            ),
            Err(GeomError::HolesOverlap { .. })
        ));
    }
}
