use serde::{Deserialize, Serialize};

use super::norm_inf;
use crate::geometry::Point;
use crate::mesh::TriMesh;

const NODAL_TIE_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalComponent {
    /// `1` or `-1`.
    pub sign: i8,
    pub vertex_count: usize,
    pub touches_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalDecomposition {
    /// Zero-level pieces of the P1 interpolant, one per crossed triangle.
    pub segments: Vec<(Point, Point)>,
    /// Component index per vertex; `None` for vertices within the tie
    /// tolerance of zero.
    pub domain_label: Vec<Option<usize>>,
    pub components: Vec<NodalComponent>,
    pub positive_component_count: usize,
}

impl NodalDecomposition {
    pub fn all_touch_boundary(&self) -> bool {
        self.components.iter().all(|c| c.touches_boundary)
    }

    pub fn interior_components(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| !self.components[i].touches_boundary)
            .collect()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Sign components of `w` over the vertex graph and the zero set of its
/// interpolant.
///
/// # Panics
/// If `w` does not have one value per vertex.
pub fn nodal_decomposition(mesh: &TriMesh, w: &[f64]) -> NodalDecomposition {
    let n = mesh.vertex_count();
    assert_eq!(w.len(), n, "one value per vertex");
    let tie = NODAL_TIE_REL * norm_inf(w);
    let sign: Vec<i8> = w
        .iter()
        .map(|&x| if x > tie { 1 } else if x < -tie { -1 } else { 0 })
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in mesh.edges() {
        if sign[a] != 0 && sign[a] == sign[b] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }

    // Components numbered by their lowest vertex.
    let mut id = vec![usize::MAX; n];
    let mut domain_label = vec![None; n];
    let mut components: Vec<NodalComponent> = Vec::new();
    let near_boundary = mesh.h_max;
    for v in 0..n {
        if sign[v] == 0 {
            continue;
        }
        let r = find(&mut parent, v);
        if id[r] == usize::MAX {
            id[r] = components.len();
            components.push(NodalComponent {
                sign: sign[v],
                vertex_count: 0,
                touches_boundary: false,
            });
        }
        let c = &mut components[id[r]];
        c.vertex_count += 1;
        if mesh.is_boundary(v) || mesh.polygon.clearance(mesh.vertices[v]) <= near_boundary {
            c.touches_boundary = true;
        }
        domain_label[v] = Some(id[r]);
    }

    let mut segments = Vec::new();
    for t in &mesh.triangles {
        let mut pts = Vec::with_capacity(3);
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let (wa, wb) = (w[a], w[b]);
            if (wa >= 0.0) != (wb >= 0.0) {
                let s = wa / (wa - wb);
                pts.push(mesh.vertices[a].lerp(mesh.vertices[b], s));
            }
        }
        if pts.len() == 2 {
            segments.push((pts[0], pts[1]));
        }
    }

    let positive_component_count = components.iter().filter(|c| c.sign > 0).count();
    NodalDecomposition {
        segments,
        domain_label,
        components,
        positive_component_count,
    }
}
