use serde::{Deserialize, Serialize};

use super::{GeometryError, Point};

/// A strictly convex polygon with counterclockwise vertices.
///
/// Construct with [`ConvexPolygon::validate`]; the constructor normalises
/// orientation and drops repeated or collinear vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    area: f64,
    centroid: Point,
    #[serde(skip)]
    scale: f64,
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
        }
        let raw = Raw::deserialize(d)?;
        ConvexPolygon::validate(&raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// Result of the rotating-calipers sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diameter {
    pub d: f64,
    pub endpoints: (Point, Point),
    #[serde(skip)]
    pub indices: (usize, usize),
}

fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        s += pts[i].cross(pts[(i + 1) % n]);
    }
    0.5 * s
}

impl ConvexPolygon {
    pub fn validate(raw: &[Point]) -> Result<ConvexPolygon, GeometryError> {
        if raw.len() < 3 {
            return Err(GeometryError::TooFewVertices(raw.len()));
        }
        if let Some(p) = raw.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(*p));
        }
        let (mut lo, mut hi) = (raw[0], raw[0]);
        for p in raw {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let scale = lo.dist(hi);
        if scale == 0.0 {
            return Err(GeometryError::DegenerateArea(0.0));
        }
        let area = signed_area(raw);
        if area.abs() <= 1e-12 * scale * scale {
            return Err(GeometryError::DegenerateArea(area.abs()));
        }
        let mut pts: Vec<Point> = raw.to_vec();
        if area < 0.0 {
            pts.reverse();
        }

        // Drop near-duplicates, then collinear vertices, until stable.
        let dup_tol = 1e-9 * scale;
        let col_tol = 1e-12 * scale * scale;
        loop {
            let n = pts.len();
            if n < 3 {
                return Err(GeometryError::DegenerateArea(0.0));
            }
            let mut drop = None;
            for i in 0..n {
                if pts[i].dist(pts[(i + 1) % n]) <= dup_tol {
                    drop = Some((i + 1) % n);
                    break;
                }
            }
            if drop.is_none() {
                for i in 0..n {
                    let a = pts[(i + n - 1) % n];
                    let b = pts[i];
                    let c = pts[(i + 1) % n];
                    if (b - a).cross(c - b).abs() <= col_tol {
                        drop = Some(i);
                        break;
                    }
                }
            }
            match drop {
                Some(i) => {
                    pts.remove(i);
                }
                None => break,
            }
        }

        let n = pts.len();
        let mut turning = 0.0;
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let c = pts[(i + 2) % n];
            let cr = (b - a).cross(c - b);
            if cr < -col_tol {
                return Err(GeometryError::NotConvex { vertex: (i + 1) % n });
            }
            turning += cr.atan2((b - a).dot(c - b));
        }
        // Left turns everywhere but winding twice is a star, not a convex polygon.
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::NotConvex { vertex: 0 });
        }

        let area = signed_area(&pts);
        if area <= 1e-12 * scale * scale {
            return Err(GeometryError::DegenerateArea(area));
        }
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..n {
            let p = pts[i];
            let q = pts[(i + 1) % n];
            let c = p.cross(q);
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        let centroid = Point::new(cx / (6.0 * area), cy / (6.0 * area));
        Ok(ConvexPolygon {
            vertices: pts,
            area,
            centroid,
            scale,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point {
        self.centroid
    }

    /// Bounding-box diagonal; the length scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edge_normal(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        let d = b - a;
        d.perp_right() * (1.0 / d.norm())
    }

    /// Signed distance from `p` to the supporting line of edge `i`;
    /// positive on the interior side.
    pub fn edge_clearance(&self, i: usize, p: Point) -> f64 {
        let (a, _) = self.edge(i);
        -(p - a).dot(self.edge_normal(i))
    }

    /// Minimum signed distance to all edge lines (the distance to the
    /// boundary for interior points, negative outside).
    pub fn clearance(&self, p: Point) -> f64 {
        (0..self.len())
            .map(|i| self.edge_clearance(i, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed-region membership with slack `1e-12 * scale`.
    pub fn contains(&self, p: Point) -> bool {
        self.clearance(p) >= -1e-12 * self.scale
    }

    /// Largest pairwise vertex distance by rotating calipers.
    ///
    /// Every antipodal vertex pair is visited and compared through
    /// `dist2`, so the result is bit-identical to an exhaustive search.
    pub fn diameter(&self) -> Diameter {
        let v = &self.vertices;
        let n = v.len();
        let area2 = |i: usize, j: usize, k: usize| (v[j % n] - v[i % n]).cross(v[k % n] - v[i % n]);
        let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
        let consider = |i: usize, j: usize, best: &mut (f64, usize, usize)| {
            let (i, j) = (i % n, j % n);
            let d2 = v[i].dist2(v[j]);
            if d2 > best.0 {
                *best = (d2, i.min(j), i.max(j));
            }
        };
        let mut j = 1;
        for i in 0..n {
            while j < i + n && area2(i, i + 1, j + 1) > area2(i, i + 1, j) {
                j += 1;
            }
            consider(i, j, &mut best);
            consider(i + 1, j, &mut best);
            consider(i, j + 1, &mut best);
            consider(i + 1, j + 1, &mut best);
        }
        let (d2, a, b) = best;
        Diameter {
            d: d2.sqrt(),
            endpoints: (v[a], v[b]),
            indices: (a, b),
        }
    }

    /// `max_v |p - v|`, the farthest boundary distance. On a segment the
    /// distance to `p` is convex, so the supremum over the boundary is
    /// attained at a vertex.
    pub fn farthest_boundary_distance(&self, p: Point) -> f64 {
        self.vertices
            .iter()
            .map(|v| p.dist2(*v))
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Where the ray `origin + t dir` (t >= 0) leaves the polygon; `origin`
    /// must be inside.
    pub fn ray_exit(&self, origin: Point, dir: Point) -> f64 {
        let mut t_exit = f64::INFINITY;
        for i in 0..self.len() {
            let nrm = self.edge_normal(i);
            let rate = dir.dot(nrm);
            if rate > 0.0 {
                let t = self.edge_clearance(i, origin) / rate;
                t_exit = t_exit.min(t.max(0.0));
            }
        }
        t_exit
    }

    pub fn translated(&self, by: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| *v + by).collect(),
            area: self.area,
            centroid: self.centroid + by,
            scale: self.scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn square_ccw_and_cw() {
        let p = ConvexPolygon::validate(&unit_square()).unwrap();
        assert_eq!(p.area(), 1.0);
        assert_eq!(p.vertices(), unit_square().as_slice());
        let mut cw = unit_square();
        cw.reverse();
        let q = ConvexPolygon::validate(&cw).unwrap();
        assert_eq!(q.area(), 1.0);
        // reversed twice is the original cyclic order
        let v = q.vertices();
        for i in 0..4 {
            let (a, b) = (v[i], v[(i + 1) % 4]);
            assert!(a.cross(b) >= 0.0 || (b - a).cross(v[(i + 2) % 4] - b) > 0.0);
        }
        assert_eq!(q.centroid(), Point::new(0.5, 0.5));
    }

    #[test]
    fn errors() {
        let line = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        assert!(matches!(
            ConvexPolygon::validate(&line),
            Err(GeometryError::DegenerateArea(_))
        ));
        assert!(matches!(
            ConvexPolygon::validate(&line[..2]),
            Err(GeometryError::TooFewVertices(2))
        ));
        let dart = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 2.0),
            Point::new(0.5, 1.0),
        ];
        assert!(matches!(
            ConvexPolygon::validate(&dart),
            Err(GeometryError::NotConvex { .. })
        ));
        let pentagram: Vec<Point> = (0..5)
            .map(|i| {
                let t = std::f64::consts::TAU * (2 * i) as f64 / 5.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        assert!(ConvexPolygon::validate(&pentagram).is_err());
    }

    #[test]
    fn drops_duplicates_and_collinear() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let p = ConvexPolygon::validate(&pts).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn square_diameter() {
        let p = ConvexPolygon::validate(&unit_square()).unwrap();
        let d = p.diameter();
        assert!((d.d - 2f64.sqrt()).abs() < 1e-15);
        let (a, b) = d.endpoints;
        assert!((a.dist(b) - d.d).abs() < 1e-15);
        assert_eq!((a - b).x.abs(), 1.0);
        assert_eq!((a - b).y.abs(), 1.0);
    }

    #[test]
    fn hexagon_diameter() {
        let hex: Vec<Point> = (0..6)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 6.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let p = ConvexPolygon::validate(&hex).unwrap();
        let d = p.diameter();
        assert!((d.d - 2.0).abs() < 1e-12);
        let (a, b) = d.endpoints;
        assert!((a + b).norm() < 1e-12, "endpoints should be opposite");
    }

    #[test]
    fn membership() {
        let p = ConvexPolygon::validate(&unit_square()).unwrap();
        assert!(p.contains(Point::new(0.5, 0.5)));
        assert!(!p.contains(Point::new(1.5, 0.5)));
        assert!(p.contains(Point::new(1.0, 0.5)));
        assert!(p.contains(Point::new(0.5, 0.0)));
    }

    #[test]
    fn farthest_distance() {
        let p = ConvexPolygon::validate(&unit_square()).unwrap();
        let f = p.farthest_boundary_distance(Point::new(0.5, 0.5));
        assert!((f - 0.5f64.sqrt()).abs() < 1e-15);
        let v = p.vertices()[2];
        assert!(p.farthest_boundary_distance(v) <= p.diameter().d);
    }
}
