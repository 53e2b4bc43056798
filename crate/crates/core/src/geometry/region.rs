//! The set `E = { p in Omega : max_{y on boundary} |p - y| <= ratio * diam }`.
//!
//! `E` is the intersection of `Omega` with the disks of radius
//! `ratio * diam` about every vertex, hence convex, so casting rays from
//! any interior member and bisecting along each recovers its boundary.

use serde::{Deserialize, Serialize};

use super::{min_enclosing_circle, ConvexPolygon, GeometryError, Point};

pub const REGION_RAYS: usize = 720;
pub const REGION_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionRegion {
    /// `ratio * diam`.
    pub threshold: f64,
    pub ratio: f64,
    /// One point per ray, counterclockwise.
    pub boundary: Vec<Point>,
    /// `true` where the ray hit the polygon boundary before the farthest
    /// distance reached the threshold; there `F(p) < threshold`.
    pub clipped: Vec<bool>,
    /// Center of the minimum enclosing circle, the minimiser of `F`.
    pub seed: Point,
    /// Bisection tolerance along each ray.
    pub tolerance: f64,
}

impl ExclusionRegion {
    /// Membership using the sampled boundary polyline (ray lookup from the seed).
    pub fn polyline_contains(&self, p: Point) -> bool {
        let d = p - self.seed;
        let r = d.norm();
        if r == 0.0 {
            return true;
        }
        let n = self.boundary.len();
        let theta = d.y.atan2(d.x).rem_euclid(std::f64::consts::TAU);
        let step = std::f64::consts::TAU / n as f64;
        let k = ((theta / step).floor() as usize) % n;
        let a = self.boundary[k] - self.seed;
        let b = self.boundary[(k + 1) % n] - self.seed;
        // p inside the fan triangle (seed, a, b)?
        (b - a).cross(d - a) >= 0.0
    }
}

pub fn exclusion_region(poly: &ConvexPolygon, ratio: f64) -> Result<ExclusionRegion, GeometryError> {
    if !(ratio > 0.5 && ratio < 1.0) {
        return Err(GeometryError::InvalidRatio(ratio));
    }
    let diam = poly.diameter().d;
    let threshold = ratio * diam;
    let tolerance = REGION_REL_TOL * diam;
    let seed = min_enclosing_circle(poly.vertices()).center;
    let member = |p: Point| poly.contains(p) && poly.farthest_boundary_distance(p) <= threshold;
    if !member(seed) {
        return Err(GeometryError::InternalInvariantViolation(
            "minimum enclosing circle center is not in the exclusion region".into(),
        ));
    }
    let mut boundary = Vec::with_capacity(REGION_RAYS);
    let mut clipped = Vec::with_capacity(REGION_RAYS);
    for k in 0..REGION_RAYS {
        let t = std::f64::consts::TAU * k as f64 / REGION_RAYS as f64;
        let dir = Point::new(t.cos(), t.sin());
        let t_exit = poly.ray_exit(seed, dir);
        let exit = seed + dir * t_exit;
        if poly.farthest_boundary_distance(exit) <= threshold {
            boundary.push(exit);
            clipped.push(true);
            continue;
        }
        let (mut lo, mut hi) = (0.0, t_exit);
        while hi - lo > tolerance {
            let mid = 0.5 * (lo + hi);
            if poly.farthest_boundary_distance(seed + dir * mid) <= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        boundary.push(seed + dir * (0.5 * (lo + hi)));
        clipped.push(false);
    }
    Ok(ExclusionRegion {
        threshold,
        ratio,
        boundary,
        clipped,
        seed,
        tolerance,
    })
}
