//! Art gallery solver: exact geometry, covering LPs with column and row
//! generation, cutting planes, and facet checks.

pub mod bench;
pub mod engine;
pub mod facets;
pub mod geom;
pub mod instances;
pub mod lp;
pub mod model;
pub mod separation;

pub use geom::{GeomError, Point, Polygon, Rational};
