//! Small hand-built instances with known covering structure.

use crate::geom::number::{int, ratio, Rational};
use crate::geom::{Instance, Point, Polygon};

/// A polygon with a designated guard set and witness set.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub polygon: Polygon,
    pub guards: Vec<Point>,
    pub witnesses: Vec<Point>,
}

impl Fixture {
    pub fn instance(&self) -> Instance {
        Instance {
            polygon: self.polygon.clone(),
            guards: self.guards.clone(),
            witnesses: self.witnesses.clone(),
        }
    }
}

fn p(x: Rational, y: Rational) -> Point {
    Point::new(x, y)
}

fn pi(x: i64, y: i64) -> Point {
    Point::from_ints(x, y)
}

/// Ring `outer` scaled about `center` by `s`, reversed so it is clockwise.
fn scaled_hole(outer: &[Point], center: &Point, s: &Rational) -> Vec<Point> {
    let mut hole: Vec<Point> = outer
        .iter()
        .map(|v| {
            p(
                center.x() + s * (v.x() - center.x()),
                center.y() + s * (v.y() - center.y()),
            )
        })
        .collect();
    hole.reverse();
    hole
}

fn edge_midpoints(ring: &[Point]) -> Vec<Point> {
    (0..ring.len())
        .map(|i| ring[i].midpoint(&ring[(i + 1) % ring.len()]))
        .collect()
}

/// Triangle with a concentric triangular hole. Each corner guard misses
/// exactly the hole-edge witness facing away from it, so the covering
/// matrix is the 3x3 circulant with zero diagonal.
pub fn triangle_ring() -> Fixture {
    let outer = vec![pi(0, 0), pi(60, 0), pi(30, 52)];
    let center = p(int(30), ratio(52, 3));
    let hole = scaled_hole(&outer, &center, &ratio(1, 2));
    // witness i lies on the hole edge opposite corner i
    let mut ccw = hole.clone();
    ccw.reverse();
    let mids = edge_midpoints(&ccw);
    let witnesses = vec![mids[1].clone(), mids[2].clone(), mids[0].clone()];
    Fixture {
        name: "triangle-ring",
        guards: outer.clone(),
        polygon: Polygon::new(outer, vec![hole]).expect("valid fixture"),
        witnesses,
    }
}

fn pinwheel_ring(arm: i64, pocket: bool) -> Vec<Point> {
    let l = arm;
    let mut ring = vec![pi(-4, -4)];
    if pocket {
        ring.extend([
            p(ratio(-7, 4), int(-4)),
            p(ratio(-31, 4), int(-10)),
            p(ratio(-29, 4), int(-10)),
            p(ratio(-5, 4), int(-4)),
        ]);
    }
    ring.extend([
        pi(-1, -4),
        pi(-1, -4 - l),
        pi(3, -4 - l),
        pi(3, -4),
        pi(4, -4),
        pi(4, -1),
        pi(4 + l, -1),
        pi(4 + l, 3),
        pi(4, 3),
        pi(4, 4),
        pi(1, 4),
        pi(1, 4 + l),
        pi(-3, 4 + l),
        pi(-3, 4),
        pi(-4, 4),
        pi(-4, 1),
        pi(-4 - l, 1),
        pi(-4 - l, -3),
        pi(-4, -3),
    ]);
    ring
}

fn pinwheel_sets(l: i64) -> (Vec<Point>, Vec<Point>) {
    // guard i misses witness i: the end of the arm it cannot look into
    let guards = vec![
        p(ratio(5, 2), int(0)),
        p(int(0), ratio(5, 2)),
        p(ratio(-5, 2), int(0)),
        p(int(0), ratio(-5, 2)),
    ];
    let witnesses = vec![pi(-1, 4 + l), pi(-4 - l, -1), pi(1, -4 - l), pi(4 + l, 1)];
    (guards, witnesses)
}

/// Square hub with four long offset arms. Four guards near the hub center
/// each see three of the four arm ends; the polygon is star-shaped.
pub fn pinwheel() -> Fixture {
    let (guards, witnesses) = pinwheel_sets(40);
    Fixture {
        name: "pinwheel",
        polygon: Polygon::simple(pinwheel_ring(40, false)).expect("valid fixture"),
        guards,
        witnesses,
    }
}

/// The pinwheel with an extra slanted pocket in the hub wall. The pocket
/// tip is seen by only two of the four guards and the polygon is no longer
/// star-shaped.
pub fn pinwheel_with_pocket() -> Fixture {
    let (guards, witnesses) = pinwheel_sets(40);
    Fixture {
        name: "pinwheel-pocket",
        polygon: Polygon::simple(pinwheel_ring(40, true)).expect("valid fixture"),
        guards,
        witnesses,
    }
}

/// The point deep in the pocket of [`pinwheel_with_pocket`].
pub fn pocket_tip() -> Point {
    p(ratio(-15, 2), int(-10))
}

/// Pentagon with a large concentric pentagonal hole. Guards at the outer
/// corners and witnesses at the outer edge midpoints form an odd cycle:
/// every guard sees exactly the two witnesses beside it.
pub fn pentagon_ring() -> Fixture {
    let outer = vec![pi(95, 31), pi(0, 100), pi(-95, 31), pi(-59, -81), pi(59, -81)];
    let mut hole = vec![pi(76, 25), pi(0, 80), pi(-76, 25), pi(-47, -65), pi(47, -65)];
    hole.reverse();
    let witnesses = edge_midpoints(&outer);
    Fixture {
        name: "pentagon-ring",
        guards: outer.clone(),
        polygon: Polygon::new(outer, vec![hole]).expect("valid fixture"),
        witnesses,
    }
}

/// Axis-aligned square of side `s` with its corners as guards and witnesses.
pub fn square(s: i64) -> Fixture {
    let ring = vec![pi(0, 0), pi(s, 0), pi(s, s), pi(0, s)];
    Fixture {
        name: "square",
        guards: ring.clone(),
        witnesses: ring.clone(),
        polygon: Polygon::simple(ring).expect("valid fixture"),
    }
}

/// L-shaped hexagon with one reflex corner at (2, 2).
pub fn l_shape() -> Polygon {
    Polygon::simple(vec![pi(0, 0), pi(4, 0), pi(4, 2), pi(2, 2), pi(2, 4), pi(0, 4)])
        .expect("valid fixture")
}

pub fn all() -> Vec<Fixture> {
    vec![
        triangle_ring(),
        pinwheel(),
        pinwheel_with_pocket(),
        pentagon_ring(),
        square(4),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{kernel, sees};

    fn matrix(f: &Fixture) -> Vec<Vec<bool>> {
        f.witnesses
            .iter()
            .map(|w| f.guards.iter().map(|g| sees(g, w, &f.polygon).unwrap()).collect())
            .collect()
    }

    #[test]
    fn triangle_ring_is_circulant() {
        let f = triangle_ring();
        let m = matrix(&f);
        for (i, row) in m.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                assert_eq!(s, i != j, "witness {i} guard {j}");
            }
        }
        assert!(kernel(&f.polygon).is_none());
    }

    #[test]
    fn pinwheels_are_circulant() {
        for f in [pinwheel(), pinwheel_with_pocket()] {
            let m = matrix(&f);
            for (i, row) in m.iter().enumerate() {
                for (j, &s) in row.iter().enumerate() {
                    assert_eq!(s, i != j, "{} witness {i} guard {j}", f.name);
                }
            }
        }
        let k = kernel(&pinwheel().polygon).unwrap();
        assert!(k.contains(&pi(0, 0)));
        assert!(kernel(&pinwheel_with_pocket().polygon).is_none());
        let f = pinwheel_with_pocket();
        let seen: Vec<bool> = f.guards.iter().map(|g| sees(g, &pocket_tip(), &f.polygon).unwrap()).collect();
        assert_eq!(seen, vec![true, false, false, true]);
    }

    #[test]
    fn pentagon_ring_is_odd_cycle() {
        let f = pentagon_ring();
        let m = matrix(&f);
        for (i, row) in m.iter().enumerate() {
            let seen: Vec<usize> = (0..5).filter(|&j| row[j]).collect();
            let mut expect = vec![i, (i + 1) % 5];
            expect.sort();
            assert_eq!(seen, expect, "witness {i}");
        }
    }
}
