//! Shared fixtures for the criterion benchmarks.

use gallery_core::bench::{generate, Class, GenSpec};
use gallery_core::geom::{Point, Polygon};
use gallery_core::model::Model;

/// A generated instance; panics if the generator gives up.
pub fn instance(class: Class, size: usize, seed: u64) -> Polygon {
    generate(&GenSpec::new(class, size, seed)).expect("benchmark instance generates")
}

/// Every `step`-th vertex of `poly`, as guard candidates.
pub fn sample_vertices(poly: &Polygon, step: usize) -> Vec<Point> {
    poly.vertices().step_by(step.max(1)).cloned().collect()
}

/// The vertex-guard, vertex-witness model of a generated instance.
pub fn vertex_model(class: Class, size: usize, seed: u64) -> Model {
    Model::new(instance(class, size, seed))
}
