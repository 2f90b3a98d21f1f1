use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::number::{self, cmp_filtered, Rational};

/// A point with exact rational coordinates. A float image of the
/// coordinates is cached for filtered predicates and rendering.
#[derive(Clone)]
pub struct Point {
    x: Rational,
    y: Rational,
    fx: f64,
    fy: f64,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        let fx = number::to_f64(&x);
        let fy = number::to_f64(&y);
        Point { x, y, fx, fy }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(number::int(x), number::int(y))
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let h = number::half();
        Point::new((&self.x + &other.x) * &h, (&self.y + &other.y) * &h)
    }

    /// `self + t * (other - self)`
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point::new(
            &self.x + (&other.x - &self.x) * t,
            &self.y + (&other.y - &self.y) * t,
        )
    }

    pub fn offset(&self, dx: &Rational, dy: &Rational) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }

    pub fn cmp_x(&self, other: &Point) -> Ordering {
        cmp_filtered(&self.x, self.fx, &other.x, other.fx)
    }

    pub fn cmp_y(&self, other: &Point) -> Ordering {
        cmp_filtered(&self.y, self.fy, &other.y, other.fy)
    }

    pub fn dist2_approx(&self, other: &Point) -> f64 {
        let dx = self.fx - other.fx;
        let dy = self.fy - other.fy;
        dx * dx + dy * dy
    }

    pub fn to_strings(&self) -> [String; 2] {
        [
            number::format_rational(&self.x),
            number::format_rational(&self.y),
        ]
    }

    pub fn parse(x: &str, y: &str) -> Option<Point> {
        Some(Point::new(
            number::parse_rational(x)?,
            number::parse_rational(y)?,
        ))
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic: x first, then y.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_x(other).then_with(|| self.cmp_y(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            number::format_rational(&self.x),
            number::format_rational(&self.y)
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}",
            number::format_rational(&self.x),
            number::format_rational(&self.y)
        )
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = <[serde_json::Value; 2]>::deserialize(d)?;
        let coord = |v: &serde_json::Value| -> Result<Rational, D::Error> {
            match v {
                serde_json::Value::String(s) => number::parse_rational(s)
                    .ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))),
                serde_json::Value::Number(n) => number::parse_rational(&n.to_string())
                    .ok_or_else(|| D::Error::custom(format!("bad number {n}"))),
                other => Err(D::Error::custom(format!("bad coordinate {other}"))),
            }
        };
        Ok(Point::new(coord(&raw[0])?, coord(&raw[1])?))
    }
}

/// Sign of the cross product `(b - a) x (c - a)`: `Greater` when `c` lies
/// to the left of the directed line `a -> b`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let (abx, aby) = (b.fx - a.fx, b.fy - a.fy);
    let (acx, acy) = (c.fx - a.fx, c.fy - a.fy);
    let det = abx * acy - aby * acx;
    let mag = (abx * acy).abs() + (aby * acx).abs();
    let scale = a.fx.abs().max(a.fy.abs()).max(b.fx.abs()).max(b.fy.abs());
    let scale = scale.max(c.fx.abs()).max(c.fy.abs());
    let bound = 1e-10 * (mag + scale * scale * 1e-6);
    if det.is_finite() && bound.is_finite() && det.abs() > bound && det.abs() > 1e-280 {
        return if det > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    orient_exact(a, b, c)
}

pub fn orient_exact(a: &Point, b: &Point, c: &Point) -> Ordering {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs.cmp(&rhs)
}

/// Exact cross product `(b - a) x (c - a)`.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Sign of the dot product `(b - a) . (c - a)`.
pub fn dot_sign(a: &Point, b: &Point, c: &Point) -> Ordering {
    let d = (b.fx - a.fx) * (c.fx - a.fx) + (b.fy - a.fy) * (c.fy - a.fy);
    let mag = ((b.fx - a.fx) * (c.fx - a.fx)).abs() + ((b.fy - a.fy) * (c.fy - a.fy)).abs();
    if d.is_finite() && d.abs() > 1e-10 * mag && d.abs() > 1e-280 {
        return if d > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    let v = (&b.x - &a.x) * (&c.x - &a.x) + (&b.y - &a.y) * (&c.y - &a.y);
    v.cmp(&Rational::from_integer(0.into()))
}

/// Closed segment membership.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != Ordering::Equal {
        return false;
    }
    in_box(p, a, b)
}

/// `p` within the axis-aligned box spanned by `a` and `b` (inclusive).
pub fn in_box(p: &Point, a: &Point, b: &Point) -> bool {
    let (lox, hix) = if a.cmp_x(b) == Ordering::Greater { (b, a) } else { (a, b) };
    let (loy, hiy) = if a.cmp_y(b) == Ordering::Greater { (b, a) } else { (a, b) };
    p.cmp_x(lox) != Ordering::Less
        && p.cmp_x(hix) != Ordering::Greater
        && p.cmp_y(loy) != Ordering::Less
        && p.cmp_y(hiy) != Ordering::Greater
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    None,
    Point(Point),
    Overlap(Point, Point),
}

fn boxes_disjoint(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let (ax0, ax1) = minmax(a.fx, b.fx);
    let (ay0, ay1) = minmax(a.fy, b.fy);
    let (cx0, cx1) = minmax(c.fx, d.fx);
    let (cy0, cy1) = minmax(c.fy, d.fy);
    let eps = 1e-9 * (1.0 + ax1.abs().max(ay1.abs()).max(cx1.abs()).max(cy1.abs()).max(ax0.abs()).max(ay0.abs()).max(cx0.abs()).max(cy0.abs()));
    ax1 + eps < cx0 || cx1 + eps < ax0 || ay1 + eps < cy0 || cy1 + eps < ay0
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Exact intersection of closed segments `ab` and `cd`.
pub fn segment_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentIntersection {
    if boxes_disjoint(a, b, c, d) {
        return SegmentIntersection::None;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    use Ordering::*;
    if o1 == Equal && o2 == Equal {
        // collinear
        let mut pts: Vec<Point> = Vec::new();
        for (p, s0, s1) in [(a, c, d), (b, c, d), (c, a, b), (d, a, b)] {
            if in_box(p, s0, s1) && !pts.contains(p) {
                pts.push(p.clone());
            }
        }
        return match pts.len() {
            0 => SegmentIntersection::None,
            1 => SegmentIntersection::Point(pts.pop().unwrap()),
            _ => {
                pts.sort();
                let lo = pts.first().unwrap().clone();
                let hi = pts.last().unwrap().clone();
                if lo == hi {
                    SegmentIntersection::Point(lo)
                } else {
                    SegmentIntersection::Overlap(lo, hi)
                }
            }
        };
    }
    if o1 == o2 || o3 == o4 {
        // both on the same side (a zero side case is handled by equality below)
        if o1 == o2 && o1 != Equal {
            return SegmentIntersection::None;
        }
        if o3 == o4 && o3 != Equal {
            return SegmentIntersection::None;
        }
    }
    if o1 == Equal {
        return if in_box(c, a, b) { SegmentIntersection::Point(c.clone()) } else { SegmentIntersection::None };
    }
    if o2 == Equal {
        return if in_box(d, a, b) { SegmentIntersection::Point(d.clone()) } else { SegmentIntersection::None };
    }
    if o3 == Equal {
        return if in_box(a, c, d) { SegmentIntersection::Point(a.clone()) } else { SegmentIntersection::None };
    }
    if o4 == Equal {
        return if in_box(b, c, d) { SegmentIntersection::Point(b.clone()) } else { SegmentIntersection::None };
    }
    if o1 != o2 && o3 != o4 {
        return SegmentIntersection::Point(line_intersection(a, b, c, d).expect("non-parallel"));
    }
    SegmentIntersection::None
}

/// Intersection of the infinite lines through `ab` and `cd`.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = (&b.x - &a.x, &b.y - &a.y);
    let s = (&d.x - &c.x, &d.y - &c.y);
    let denom = &r.0 * &s.1 - &r.1 * &s.0;
    if num_traits::Zero::is_zero(&denom) {
        return None;
    }
    let qp = (&c.x - &a.x, &c.y - &a.y);
    let t = (&qp.0 * &s.1 - &qp.1 * &s.0) / denom;
    Some(Point::new(&a.x + &r.0 * &t, &a.y + &r.1 * &t))
}

/// Proper crossing: interiors intersect in a single point that is an
/// endpoint of neither segment.
pub fn segments_cross_properly(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    if boxes_disjoint(a, b, c, d) {
        return false;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    use Ordering::*;
    o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal && o1 != o2 && o3 != o4
}

/// Compares the directions `a - origin` and `b - origin` by polar angle in
/// `[0, 2pi)`, measured counterclockwise from the positive x axis.
pub fn cmp_angle(origin: &Point, a: &Point, b: &Point) -> Ordering {
    let ha = half_plane(origin, a);
    let hb = half_plane(origin, b);
    if ha != hb {
        return ha.cmp(&hb);
    }
    // same half plane: a before b when b is to the left of origin->a
    match orient(origin, a, b) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    }
}

/// 0 for angles in [0, pi), 1 for [pi, 2pi).
fn half_plane(origin: &Point, p: &Point) -> u8 {
    match p.cmp_y(origin) {
        Ordering::Greater => 0,
        Ordering::Less => 1,
        Ordering::Equal => {
            if p.cmp_x(origin) == Ordering::Less {
                1
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::number::ratio;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), Ordering::Greater);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, -1)), Ordering::Less);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(3, 3)), Ordering::Equal);
        let tiny = Point::new(ratio(1, 1 << 40), ratio(1, 1 << 40) + ratio(1, 1 << 62));
        assert_eq!(orient(&p(0, 0), &p(1, 1), &tiny), Ordering::Greater);
    }

    #[test]
    fn intersections() {
        use SegmentIntersection as SI;
        assert_eq!(
            segment_intersection(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)),
            SI::Point(p(1, 1))
        );
        assert_eq!(segment_intersection(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)), SI::None);
        assert_eq!(
            segment_intersection(&p(0, 0), &p(4, 0), &p(2, 0), &p(6, 0)),
            SI::Overlap(p(2, 0), p(4, 0))
        );
        assert_eq!(
            segment_intersection(&p(0, 0), &p(4, 0), &p(4, 0), &p(6, 3)),
            SI::Point(p(4, 0))
        );
        assert_eq!(
            segment_intersection(&p(0, 0), &p(4, 0), &p(2, 0), &p(2, 3)),
            SI::Point(p(2, 0))
        );
        assert!(!segments_cross_properly(&p(0, 0), &p(4, 0), &p(2, 0), &p(2, 3)));
        assert!(segments_cross_properly(&p(0, 0), &p(4, 0), &p(2, -1), &p(2, 3)));
    }

    #[test]
    fn angular_order() {
        let o = p(0, 0);
        let mut pts = vec![p(0, -1), p(-1, 0), p(1, 1), p(1, 0), p(0, 1), p(1, -1)];
        pts.sort_by(|a, b| cmp_angle(&o, a, b));
        assert_eq!(pts, vec![p(1, 0), p(1, 1), p(0, 1), p(-1, 0), p(0, -1), p(1, -1)]);
    }
}
