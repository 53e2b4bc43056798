use serde::{Deserialize, Serialize};

use super::norm_inf;
use crate::bessel::SpectralConstants;
use crate::geometry::{ConvexPolygon, Point};
use crate::mesh::TriMesh;

/// Relative tie tolerance for neighbour differences.
pub const TIE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Max,
    Min,
    Saddle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub vertex_id: usize,
    pub location: Point,
    pub value: f64,
    pub kind: CriticalKind,
    pub alternations: usize,
    pub farthest_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub vertex_id: usize,
    pub location: Point,
    pub value: f64,
    pub kind: CriticalKind,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub threshold: f64,
    pub tolerance: f64,
    pub critical_points: Vec<CriticalPoint>,
    pub violations: Vec<CriticalPoint>,
    pub pass: bool,
}

/// Whether neighbour `u` counts as above vertex `v`. Near-ties are broken
/// by vertex index so every difference has a definite sign.
fn above(psi: &[f64], v: usize, u: usize, tie: f64) -> bool {
    let d = psi[u] - psi[v];
    if d.abs() <= tie {
        u > v
    } else {
        d > 0.0
    }
}

/// Sign alternations of `psi(u) - psi(v)` around the link of `v`.
pub fn link_alternations(mesh: &TriMesh, psi: &[f64], v: usize, neighbors: &[usize], tie: f64) -> (usize, bool) {
    let link = mesh.ordered_link(v, neighbors);
    let signs: Vec<bool> = link.iter().map(|&u| above(psi, v, u, tie)).collect();
    let n = signs.len();
    let changes = (0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count();
    (changes, signs.first().copied().unwrap_or(false))
}

/// Combinatorial critical vertices of the P1 interpolant of `psi`.
/// Only interior vertices are examined.
///
/// # Panics
/// If `psi` does not have one value per vertex.
pub fn find_critical_points(mesh: &TriMesh, psi: &[f64]) -> Vec<CriticalPoint> {
    assert_eq!(psi.len(), mesh.vertex_count(), "one value per vertex");
    let tie = TIE_REL * norm_inf(psi);
    let nbrs = mesh.vertex_neighbors();
    let mut out = Vec::new();
    for v in 0..mesh.vertex_count() {
        if !mesh.interior_mask[v] {
            continue;
        }
        let (alternations, first_above) = link_alternations(mesh, psi, v, &nbrs[v], tie);
        let kind = match alternations {
            0 if first_above => CriticalKind::Min,
            0 => CriticalKind::Max,
            2 => continue,
            _ => CriticalKind::Saddle,
        };
        let location = mesh.vertices[v];
        out.push(CriticalPoint {
            vertex_id: v,
            location,
            value: psi[v],
            kind,
            alternations,
            farthest_distance: mesh.polygon.farthest_boundary_distance(location),
        });
    }
    out
}

/// Vertices attaining the global maximum and minimum (lowest index on ties).
pub fn global_extrema(mesh: &TriMesh, psi: &[f64]) -> Vec<Extremum> {
    let mut imax = 0;
    let mut imin = 0;
    for (i, &x) in psi.iter().enumerate() {
        if x > psi[imax] {
            imax = i;
        }
        if x < psi[imin] {
            imin = i;
        }
    }
    [(imax, CriticalKind::Max), (imin, CriticalKind::Min)]
        .into_iter()
        .map(|(i, kind)| Extremum {
            vertex_id: i,
            location: mesh.vertices[i],
            value: psi[i],
            kind,
            on_boundary: mesh.is_boundary(i),
        })
        .collect()
}

/// Flags points whose farthest boundary distance is at most
/// `c_excl * diam - 2 h_max`.
pub fn theorem_check(
    points: &[CriticalPoint],
    poly: &ConvexPolygon,
    constants: &SpectralConstants,
    h_max: f64,
) -> TheoremVerdict {
    let threshold = constants.c_excl * poly.diameter().d;
    let tolerance = 2.0 * h_max;
    let violations: Vec<CriticalPoint> = points
        .iter()
        .filter(|p| p.farthest_distance <= threshold - tolerance)
        .cloned()
        .collect();
    TheoremVerdict {
        threshold,
        tolerance,
        critical_points: points.to_vec(),
        pass: violations.is_empty(),
        violations,
    }
}
