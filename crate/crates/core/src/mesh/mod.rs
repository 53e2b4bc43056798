//! Conforming P1 triangle meshes of convex polygons.
//!
//! Meshes are built by Delaunay triangulation of boundary samples plus a
//! clipped hexagonal lattice. For a convex polygon the triangulated hull
//! is the polygon itself, so no constrained triangulation is needed.

mod delaunay;
mod generate;
mod io;
mod locate;

pub use generate::{generate, MIN_ANGLE_DEG};
pub use io::{read_mesh_dump, write_mesh_dump, MESH_DUMP_HEADER};
pub use locate::Locator;

pub use delaunay::{in_circle, is_ccw, signed_area};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ConvexPolygon, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh size h = {h} must satisfy 0 < h < diam/4 = {limit}")]
    InvalidH { h: f64, limit: f64 },
    #[error("minimum angle {min_angle:.2} deg below {required} deg after refinement rounds")]
    QualityFailure { min_angle: f64, required: f64 },
    #[error("triangulation does not cover the polygon: {0}")]
    Coverage(String),
    #[error("malformed mesh dump: {0}")]
    Dump(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    /// Outward unit normal of the polygon edge this segment lies on.
    pub normal: Point,
    pub source_edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshQuality {
    /// Degrees.
    pub min_angle: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub vertex_count: usize,
    pub triangle_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Point>,
    /// CCW vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Closed CCW loop: `boundary_edges[i].b == boundary_edges[i + 1].a`.
    pub boundary_edges: Vec<BoundaryEdge>,
    pub h_max: f64,
    pub interior_mask: Vec<bool>,
    pub polygon: ConvexPolygon,
}

impl TriMesh {
    pub(crate) fn assemble(
        polygon: &ConvexPolygon,
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary_loop: &[(usize, usize)],
    ) -> TriMesh {
        let mut interior_mask = vec![true; vertices.len()];
        let mut boundary_edges = Vec::with_capacity(boundary_loop.len());
        for (i, &(a, source_edge)) in boundary_loop.iter().enumerate() {
            let b = boundary_loop[(i + 1) % boundary_loop.len()].0;
            interior_mask[a] = false;
            boundary_edges.push(BoundaryEdge {
                a,
                b,
                normal: polygon.edge_normal(source_edge),
                source_edge,
            });
        }
        let mut mesh = TriMesh {
            vertices,
            triangles,
            boundary_edges,
            h_max: 0.0,
            interior_mask,
            polygon: polygon.clone(),
        };
        mesh.h_max = mesh.edges().iter().map(|&(a, b)| mesh.edge_len(a, b)).fold(0.0, f64::max);
        mesh
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        !self.interior_mask[v]
    }

    fn edge_len(&self, a: usize, b: usize) -> f64 {
        self.vertices[a].dist(self.vertices[b])
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        signed_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Unique undirected edges `(lo, hi)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| {
                (0..3).map(move |k| {
                    let (a, b) = (t[k], t[(k + 1) % 3]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Sorted neighbour lists.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for (a, b) in self.edges() {
            nb[a].push(b);
            nb[b].push(a);
        }
        for l in &mut nb {
            l.sort_unstable();
        }
        nb
    }

    /// Neighbours of `v` ordered counterclockwise by angle.
    pub fn ordered_link(&self, v: usize, neighbors: &[usize]) -> Vec<usize> {
        let c = self.vertices[v];
        let mut link: Vec<(f64, usize)> = neighbors
            .iter()
            .map(|&u| {
                let d = self.vertices[u] - c;
                (d.y.atan2(d.x), u)
            })
            .collect();
        link.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        link.into_iter().map(|(_, u)| u).collect()
    }

    pub fn quality(&self) -> MeshQuality {
        let mut min_angle = f64::INFINITY;
        for t in &self.triangles {
            let p = t.map(|i| self.vertices[i]);
            for k in 0..3 {
                let u = p[(k + 1) % 3] - p[k];
                let w = p[(k + 2) % 3] - p[k];
                let ang = u.cross(w).abs().atan2(u.dot(w)).to_degrees();
                min_angle = min_angle.min(ang);
            }
        }
        let (mut h_min, mut h_max) = (f64::INFINITY, 0.0f64);
        for (a, b) in self.edges() {
            let l = self.edge_len(a, b);
            h_min = h_min.min(l);
            h_max = h_max.max(l);
        }
        MeshQuality {
            min_angle,
            h_min,
            h_max,
            vertex_count: self.vertices.len(),
            triangle_count: self.triangles.len(),
        }
    }

    /// Split every triangle into four through its edge midpoints.
    pub fn refine(&self) -> TriMesh {
        let edges = self.edges();
        let mut vertices = self.vertices.clone();
        let mut mid = std::collections::HashMap::with_capacity(edges.len());
        for &(a, b) in &edges {
            mid.insert((a, b), vertices.len());
            vertices.push(self.vertices[a].midpoint(self.vertices[b]));
        }
        let m = |a: usize, b: usize| mid[&(a.min(b), a.max(b))];
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary_loop = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            boundary_loop.push((e.a, e.source_edge));
            boundary_loop.push((m(e.a, e.b), e.source_edge));
        }
        TriMesh::assemble(&self.polygon, vertices, triangles, &boundary_loop)
    }

    /// Index of the triangle containing `p` (closed), if any.
    pub fn locate(&self, p: Point, candidates: impl IntoIterator<Item = usize>) -> Option<usize> {
        let tol = -1e-12 * self.polygon.scale() * self.h_max;
        candidates.into_iter().find(|&t| {
            let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
            (b - a).cross(p - a) >= tol && (c - b).cross(p - b) >= tol && (a - c).cross(p - c) >= tol
        })
    }

    /// P1 interpolation of vertex values at a point in triangle `t`.
    pub fn interpolate(&self, t: usize, p: Point, values: &[f64]) -> f64 {
        let [i, j, k] = self.triangles[t];
        let [a, b, c] = [i, j, k].map(|v| self.vertices[v]);
        let area = (b - a).cross(c - a);
        let la = (b - p).cross(c - p) / area;
        let lb = (c - p).cross(a - p) / area;
        let lc = 1.0 - la - lb;
        la * values[i] + lb * values[j] + lc * values[k]
    }

    /// Index of the vertex closest to `p` (lowest index on ties).
    pub fn nearest_vertex(&self, p: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, v) in self.vertices.iter().enumerate() {
            let d = v.dist2(p);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    pub fn nearest_interior_vertex(&self, p: Point) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (i, v) in self.vertices.iter().enumerate() {
            if !self.interior_mask[i] {
                continue;
            }
            let d = v.dist2(p);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        best.map(|b| b.1)
    }
}
