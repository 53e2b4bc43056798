//! Convex polygonal domains: validation, diameter, inradius, minimum
//! enclosing circle, farthest-boundary distance and the exclusion region.
//!
//! All tolerances are relative to the polygon's size.

mod chebyshev;
mod enclosing;
mod point;
mod polygon;
mod region;

pub use chebyshev::inradius;
pub use enclosing::min_enclosing_circle;
pub use point::{Circle, Point};
pub use polygon::{ConvexPolygon, Diameter};
pub use region::{exclusion_region, ExclusionRegion, REGION_RAYS, REGION_REL_TOL};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite vertex {0:?}")]
    NonFinite(Point),
    #[error("polygon area {0:e} is degenerate")]
    DegenerateArea(f64),
    #[error("polygon is not convex at vertex {vertex}")]
    NotConvex { vertex: usize },
    #[error("exclusion ratio {0} outside (0.5, 1)")]
    InvalidRatio(f64),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

impl ConvexPolygon {
    pub fn inradius(&self) -> (f64, Point) {
        inradius(self)
    }

    pub fn min_enclosing_circle(&self) -> Circle {
        min_enclosing_circle(self.vertices())
    }
}
