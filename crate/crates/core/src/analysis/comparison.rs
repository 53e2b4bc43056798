use serde::{Deserialize, Serialize};

use super::{check_len, norm_inf, AnalysisError};
use crate::bessel::{bessel_j0, bessel_j1};
use crate::geometry::{ConvexPolygon, Point};
use crate::mesh::{Locator, TriMesh};

pub const BRANCH_SAMPLES: usize = 256;
const BRANCH_TIE_REL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonField {
    pub anchor: Point,
    pub anchor_vertex: usize,
    pub mu2: f64,
    /// `psi(x0)` after the sign normalisation `psi(x0) >= 0`.
    pub psi_at_anchor: f64,
    /// True when `psi` was negated to make `psi(x0) >= 0`.
    pub negated: bool,
    pub values: Vec<f64>,
}

/// `w(v) = psi(x0) J0(sqrt(mu2) |v - x0|) - psi(v)`, with `psi` negated first
/// if `psi(x0) < 0`.
pub fn build_comparison(mesh: &TriMesh, psi: &[f64], mu2: f64, x0: Point) -> Result<ComparisonField, AnalysisError> {
    check_len(mesh.vertex_count(), psi)?;
    let a = mesh.nearest_vertex(x0);
    if mesh.vertices[a].dist(x0) > 1e-12 * mesh.polygon.scale() {
        return Err(AnalysisError::AnchorNotVertex(x0));
    }
    let x0 = mesh.vertices[a];
    let negated = psi[a] < 0.0;
    let s = if negated { -1.0 } else { 1.0 };
    let pa = s * psi[a];
    let k = mu2.sqrt();
    let values = mesh
        .vertices
        .iter()
        .zip(psi)
        .enumerate()
        .map(|(i, (v, &p))| if i == a { 0.0 } else { pa * bessel_j0(k * v.dist(x0)) - s * p })
        .collect();
    Ok(ComparisonField {
        anchor: x0,
        anchor_vertex: a,
        mu2,
        psi_at_anchor: pa,
        negated,
        values,
    })
}

/// Cyclic sign changes of the P1 interpolant of `w` on a circle about the
/// anchor. Samples within `1e-10 |w|_inf` of zero are skipped.
pub fn branch_count(mesh: &TriMesh, field: &ComparisonField, radius: f64) -> Result<usize, AnalysisError> {
    check_len(mesh.vertex_count(), &field.values)?;
    let clearance = mesh.polygon.clearance(field.anchor);
    if radius >= clearance {
        return Err(AnalysisError::CircleOutsideDomain { radius, clearance });
    }
    if radius < 3.0 * mesh.h_max {
        return Err(AnalysisError::RadiusTooSmall {
            radius,
            min: 3.0 * mesh.h_max,
        });
    }
    let tie = BRANCH_TIE_REL * norm_inf(&field.values);
    let loc = Locator::new(mesh);
    let mut signs = Vec::with_capacity(BRANCH_SAMPLES);
    for i in 0..BRANCH_SAMPLES {
        let t = std::f64::consts::TAU * i as f64 / BRANCH_SAMPLES as f64;
        let p = field.anchor + Point::new(t.cos(), t.sin()) * radius;
        let w = loc
            .interpolate(p, &field.values)
            .ok_or(AnalysisError::CircleOutsideDomain { radius, clearance })?;
        if w.abs() > tie {
            signs.push(w > 0.0);
        }
    }
    let n = signs.len();
    Ok((0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFlux {
    pub point: Point,
    pub normal: Point,
    pub length: f64,
    pub value: f64,
}

/// Normal derivative of `w` at each boundary edge midpoint (mesh order),
/// from the closed form `psi(x0) sqrt(mu) J0'(sqrt(mu) r) ((x - x0) . n) / r`.
/// On the boundary `psi` itself has zero normal derivative, so only the
/// Bessel term contributes.
pub fn boundary_flux(field: &ComparisonField, mesh: &TriMesh) -> Result<Vec<BoundaryFlux>, AnalysisError> {
    if mesh.is_boundary(field.anchor_vertex) || mesh.polygon.clearance(field.anchor) <= 0.0 {
        return Err(AnalysisError::AnchorOnBoundary);
    }
    let k = field.mu2.sqrt();
    Ok(mesh
        .boundary_edges
        .iter()
        .map(|e| {
            let (a, b) = (mesh.vertices[e.a], mesh.vertices[e.b]);
            let x = a.midpoint(b);
            let d = x - field.anchor;
            let r = d.norm();
            let value = field.psi_at_anchor * k * -bessel_j1(k * r) * d.dot(e.normal) / r;
            BoundaryFlux {
                point: x,
                normal: e.normal,
                length: a.dist(b),
                value,
            }
        })
        .collect())
}

/// `min (x - x0) . n` over polygon edge midpoints; negative iff `x0` is
/// outside.
pub fn support_positivity(poly: &ConvexPolygon, x0: Point) -> f64 {
    (0..poly.len())
        .map(|i| {
            let (a, b) = poly.edge(i);
            (a.midpoint(b) - x0).dot(poly.edge_normal(i))
        })
        .fold(f64::INFINITY, f64::min)
}
