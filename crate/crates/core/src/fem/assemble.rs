//! P1 Galerkin matrices. The Neumann condition is natural, so the
//! stiffness matrix carries no boundary terms.

use super::SparseSym;
use crate::geometry::Point;
use crate::mesh::TriMesh;

fn pattern(mesh: &TriMesh) -> SparseSym {
    let mut rows = mesh.vertex_neighbors();
    for (i, r) in rows.iter_mut().enumerate() {
        let k = r.partition_point(|&j| j < i);
        r.insert(k, i);
    }
    SparseSym::with_pattern(&rows)
}

/// `K_e[i][j] = (e_i . e_j) / (4 A)` with `e_i` the edge opposite vertex `i`.
pub fn element_stiffness(p: [Point; 3]) -> [[f64; 3]; 3] {
    let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
    let e = [p[2] - p[1], p[0] - p[2], p[1] - p[0]];
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = e[i].dot(e[j]) / (4.0 * area);
        }
    }
    k
}

/// Consistent element mass `(A/12) [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn element_mass(p: [Point; 3]) -> [[f64; 3]; 3] {
    let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
    let mut m = [[area / 12.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = area / 6.0;
    }
    m
}

pub fn assemble_stiffness(mesh: &TriMesh) -> SparseSym {
    let mut k = pattern(mesh);
    for t in &mesh.triangles {
        let ke = element_stiffness(t.map(|i| mesh.vertices[i]));
        for a in 0..3 {
            for b in 0..3 {
                k.add(t[a], t[b], ke[a][b]);
            }
        }
    }
    k
}

/// Consistent mass, or its row-sum lumping when `lumped`.
pub fn assemble_mass(mesh: &TriMesh, lumped: bool) -> SparseSym {
    let mut m = pattern(mesh);
    for t in &mesh.triangles {
        let me = element_mass(t.map(|i| mesh.vertices[i]));
        for a in 0..3 {
            for b in 0..3 {
                if lumped {
                    m.add(t[a], t[a], me[a][b]);
                } else {
                    m.add(t[a], t[b], me[a][b]);
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    const RIGHT: [Point; 3] = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];

    #[test]
    fn right_triangle_stiffness() {
        let k = element_stiffness(RIGHT);
        let expect = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[i][j] - expect[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn right_triangle_mass() {
        let m = element_mass(RIGHT);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 2.0 } else { 1.0 } / 24.0;
                assert!((m[i][j] - e).abs() < 1e-16);
            }
        }
    }
}
