use super::TriMesh;
use crate::geometry::Point;

/// Uniform bucket grid over triangle bounding boxes.
pub struct Locator<'a> {
    mesh: &'a TriMesh,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> Locator<'a> {
    pub fn new(mesh: &'a TriMesh) -> Locator<'a> {
        let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for v in &mesh.vertices {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let cell = (2.0 * mesh.h_max).max(1e-12);
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).min(4096);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).min(4096);
        let mut loc = Locator {
            mesh,
            origin: lo,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let p = tri.map(|i| mesh.vertices[i]);
            let (i0, j0) = loc.cell_of(Point::new(p[0].x.min(p[1].x).min(p[2].x), p[0].y.min(p[1].y).min(p[2].y)));
            let (i1, j1) = loc.cell_of(Point::new(p[0].x.max(p[1].x).max(p[2].x), p[0].y.max(p[1].y).max(p[2].y)));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    loc.buckets[j * nx + i].push(t);
                }
            }
        }
        loc
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let f = |v: f64, o: f64, n: usize| (((v - o) / self.cell).floor().max(0.0) as usize).min(n - 1);
        (f(p.x, self.origin.x, self.nx), f(p.y, self.origin.y, self.ny))
    }

    /// Triangle containing `p`, lowest index on shared edges.
    pub fn locate(&self, p: Point) -> Option<usize> {
        let (i, j) = self.cell_of(p);
        self.mesh.locate(p, self.buckets[j * self.nx + i].iter().copied())
    }

    /// P1 interpolant at `p`, `None` outside the mesh.
    pub fn interpolate(&self, p: Point, values: &[f64]) -> Option<f64> {
        self.locate(p).map(|t| self.mesh.interpolate(t, p, values))
    }
}
