use crate::geometry::{Circle, ConvexPolygon, Point};

use super::delaunay::{is_ccw, triangulate};
use super::{MeshError, TriMesh};

pub const MIN_ANGLE_DEG: f64 = 20.0;
const SMOOTHING_PASSES: usize = 10;
const QUALITY_ROUNDS: usize = 60;

struct PointSet {
    /// Boundary samples in CCW loop order with the polygon edge each starts.
    boundary: Vec<(Point, usize)>,
    interior: Vec<Point>,
}

impl PointSet {
    fn all(&self) -> Vec<Point> {
        self.boundary
            .iter()
            .map(|b| b.0)
            .chain(self.interior.iter().copied())
            .collect()
    }
}

fn boundary_samples(poly: &ConvexPolygon, h: f64) -> Vec<(Point, usize)> {
    let mut out = Vec::new();
    for e in 0..poly.len() {
        let (a, b) = poly.edge(e);
        let pieces = (a.dist(b) / h).ceil().max(1.0) as usize;
        for j in 0..pieces {
            out.push((a.lerp(b, j as f64 / pieces as f64), e));
        }
    }
    out
}

/// Hexagonal lattice of pitch `h`, keeping points at least `h/2` from the boundary.
fn lattice(poly: &ConvexPolygon, h: f64) -> Vec<Point> {
    let v = poly.vertices();
    let (mut lo, mut hi) = (v[0], v[0]);
    for p in v {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let dy = h * 3f64.sqrt() / 2.0;
    let rows = ((hi.y - lo.y) / dy).ceil() as usize + 1;
    let cols = ((hi.x - lo.x) / h).ceil() as usize + 2;
    let mut out = Vec::new();
    for r in 0..rows {
        let y = lo.y + r as f64 * dy;
        let shift = if r % 2 == 1 { 0.5 * h } else { 0.0 };
        for c in 0..cols {
            let p = Point::new(lo.x + shift + c as f64 * h, y);
            if poly.clearance(p) >= 0.5 * h {
                out.push(p);
            }
        }
    }
    out
}

fn min_angle_of(a: Point, b: Point, c: Point) -> f64 {
    let p = [a, b, c];
    (0..3)
        .map(|k| {
            let u = p[(k + 1) % 3] - p[k];
            let w = p[(k + 2) % 3] - p[k];
            u.cross(w).abs().atan2(u.dot(w)).to_degrees()
        })
        .fold(f64::INFINITY, f64::min)
}

fn smooth(points: &mut PointSet, tris: &[[usize; 3]]) {
    let nb = points.boundary.len();
    let n = nb + points.interior.len();
    let mut adj = vec![Vec::new(); n];
    for t in tris {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    for _ in 0..SMOOTHING_PASSES {
        let all = points.all();
        for (i, p) in points.interior.iter_mut().enumerate() {
            let l = &adj[nb + i];
            if l.is_empty() {
                continue;
            }
            let mut s = Point::ORIGIN;
            for &u in l {
                s = s + all[u];
            }
            *p = s * (1.0 / l.len() as f64);
        }
    }
}

/// Inserts the circumcentre of each poor triangle unless it lies outside
/// the polygon or inside the diametral circle of a boundary segment; in
/// that case the segment is split instead. Near-duplicate centres from
/// neighbouring triangles are inserted once.
fn refine_round(poly: &ConvexPolygon, points: &mut PointSet, all: &[Point], bad: &[[usize; 3]]) {
    let nb = points.boundary.len();
    let segment = |i: usize| (points.boundary[i].0, points.boundary[(i + 1) % nb].0);
    let mut split = vec![false; nb];
    let mut fresh: Vec<Point> = Vec::new();
    for t in bad {
        let [a, b, c] = t.map(|i| all[i]);
        let Some(cc) = Circle::circumcircle(a, b, c).map(|c| c.center) else {
            continue;
        };
        let shortest = a.dist(b).min(b.dist(c)).min(c.dist(a));
        let mut encroached = None;
        let mut nearest = (f64::INFINITY, 0);
        for i in 0..nb {
            let (p, q) = segment(i);
            let m = p.midpoint(q);
            let d2 = m.dist2(cc);
            if d2 < 0.25 * p.dist2(q) {
                encroached = Some(i);
                break;
            }
            if d2 < nearest.0 {
                nearest = (d2, i);
            }
        }
        match encroached {
            None if poly.clearance(cc) > 0.0 => {
                if !fresh.iter().any(|f| f.dist(cc) < 0.5 * shortest) {
                    fresh.push(cc);
                }
            }
            Some(i) => split[i] = true,
            None => split[nearest.1] = true,
        }
    }
    points.interior.extend(fresh);
    let mut refined = Vec::with_capacity(nb + 8);
    for (i, &(p, e)) in points.boundary.iter().enumerate() {
        refined.push((p, e));
        if split[i] {
            let q = points.boundary[(i + 1) % nb].0;
            refined.push((p.midpoint(q), e));
        }
    }
    points.boundary = refined;
}

/// Quasi-uniform Delaunay mesh with boundary spacing at most `h`.
pub fn generate(poly: &ConvexPolygon, h: f64) -> Result<TriMesh, MeshError> {
    let diam = poly.diameter().d;
    if !(h > 0.0 && h < diam / 4.0) {
        return Err(MeshError::InvalidH { h, limit: diam / 4.0 });
    }
    let mut points = PointSet {
        boundary: boundary_samples(poly, h),
        interior: lattice(poly, h),
    };
    let mut worst = 0.0;
    for round in 0..=QUALITY_ROUNDS {
        if round == 0 {
            let tris = triangulate(&points.all());
            smooth(&mut points, &tris);
        }
        let all = points.all();
        let tris = triangulate(&all);

        let mut bad = Vec::new();
        worst = f64::INFINITY;
        for t in &tris {
            let [a, b, c] = t.map(|i| all[i]);
            let ang = min_angle_of(a, b, c);
            worst = f64::min(worst, ang);
            if ang < MIN_ANGLE_DEG {
                bad.push(*t);
            }
        }
        if bad.is_empty() {
            return finish(poly, &points, all, tris);
        }
        if round == QUALITY_ROUNDS {
            break;
        }
        refine_round(poly, &mut points, &all, &bad);
    }
    Err(MeshError::QualityFailure {
        min_angle: worst,
        required: MIN_ANGLE_DEG,
    })
}

fn finish(
    poly: &ConvexPolygon,
    points: &PointSet,
    all: Vec<Point>,
    tris: Vec<[usize; 3]>,
) -> Result<TriMesh, MeshError> {
    if let Some(t) = tris.iter().find(|t| !is_ccw(all[t[0]], all[t[1]], all[t[2]])) {
        return Err(MeshError::Coverage(format!("non-positive triangle {t:?}")));
    }
    let nb = points.boundary.len();
    let loop_: Vec<(usize, usize)> = (0..nb).map(|i| (i, points.boundary[i].1)).collect();
    let mesh = TriMesh::assemble(poly, all, tris, &loop_);
    let edges = mesh.edges();
    for e in &mesh.boundary_edges {
        if edges.binary_search(&(e.a.min(e.b), e.a.max(e.b))).is_err() {
            return Err(MeshError::Coverage(format!(
                "boundary segment {}-{} missing from triangulation",
                e.a, e.b
            )));
        }
    }
    let area = mesh.total_area();
    if (area - poly.area()).abs() > 1e-10 * poly.area() {
        return Err(MeshError::Coverage(format!(
            "triangles cover area {area}, polygon has {}",
            poly.area()
        )));
    }
    Ok(mesh)
}
