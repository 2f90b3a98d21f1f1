//! Exact planar geometry over rational coordinates.

pub mod arrangement;
pub mod io;
pub mod kernel;
pub mod number;
pub mod point;
pub mod polygon;
pub mod visibility;

use thiserror::Error;

pub use arrangement::{overlay, Arrangement, Cell, CellKind};
pub use io::{parse_instance, parse_polygon, write_instance, write_polygon, Instance};
pub use kernel::{kernel, Kernel};
pub use number::Rational;
pub use point::{orient, Point};
pub use polygon::{Location, Polygon};
pub use visibility::{sees, visibility_polygon, VisibilityPolygon};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("ring {ring} has fewer than 3 vertices")]
    TooFewVertices { ring: usize },
    #[error("ring {ring} has a degenerate vertex at index {index}")]
    DegenerateVertex { ring: usize, index: usize },
    #[error("ring {ring} has the wrong orientation (outer must be counterclockwise, holes clockwise)")]
    WrongOrientation { ring: usize },
    #[error("edge {edge_a} of ring {ring_a} intersects edge {edge_b} of ring {ring_b}")]
    NotSimple {
        ring_a: usize,
        edge_a: usize,
        ring_b: usize,
        edge_b: usize,
    },
    #[error("hole {hole} is not strictly inside the outer ring")]
    HoleOutside { hole: usize },
    #[error("holes {a} and {b} overlap")]
    HolesOverlap { a: usize, b: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("point {0:?} lies outside the polygon")]
    PointOutside(Point),
}
