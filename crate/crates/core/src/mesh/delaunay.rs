//! Incremental Bowyer-Watson Delaunay triangulation.
//!
//! Orientation and in-circle tests use adaptive exact predicates, so the
//! cavity is always star-shaped about the inserted point. A cavity edge
//! that would produce a non-positive triangle pulls its outer neighbour
//! into the cavity, which resolves cocircular ties deterministically.

use robust::{incircle, orient2d, Coord};

use crate::geometry::Point;

const NONE: usize = usize::MAX;

fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

/// Positive iff `d` lies strictly inside the circumcircle of CCW `(a, b, c)`.
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    incircle(coord(a), coord(b), coord(c), coord(d))
}

struct Triangulation {
    pts: Vec<Point>,
    tris: Vec<[usize; 3]>,
    nbr: Vec<[usize; 3]>, // neighbour opposite vertex k
    alive: Vec<bool>,
    mark: Vec<u32>,
    epoch: u32,
    free: Vec<usize>,
    last: usize,
}

impl Triangulation {
    fn with_super(points: &[Point]) -> Self {
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let center = lo.midpoint(hi);
        let scale = lo.dist(hi).max(f64::MIN_POSITIVE);
        // Far enough that circles through a hull edge and a super vertex
        // barely bulge inward, close enough that that bulge still exceeds
        // the roundoff dents of points sampled along a straight edge.
        let r = 1e3 * scale;
        let mut pts = points.to_vec();
        for k in 0..3 {
            let t = std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * k as f64 / 3.0;
            pts.push(center + Point::new(t.cos(), t.sin()) * r);
        }
        let n = points.len();
        Triangulation {
            pts,
            tris: vec![[n, n + 1, n + 2]],
            nbr: vec![[NONE; 3]],
            alive: vec![true],
            mark: vec![0],
            epoch: 0,
            free: Vec::new(),
            last: 0,
        }
    }

    fn locate(&self, p: Point) -> usize {
        let mut t = self.last;
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 4 * self.tris.len() + 16 {
                break;
            }
            let tri = self.tris[t];
            for r in 0..3 {
                let e = (r + steps) % 3;
                let a = self.pts[tri[(e + 1) % 3]];
                let b = self.pts[tri[(e + 2) % 3]];
                if orient(a, b, p) < 0.0 {
                    let n = self.nbr[t][e];
                    if n == NONE {
                        break 'walk;
                    }
                    t = n;
                    continue 'walk;
                }
            }
            return t;
        }
        // Fallback: exhaustive search for a containing triangle.
        (0..self.tris.len())
            .find(|&t| {
                self.alive[t] && {
                    let [a, b, c] = self.tris[t].map(|i| self.pts[i]);
                    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
                }
            })
            .expect("point outside super triangle")
    }

    fn circum_contains(&self, t: usize, p: Point) -> bool {
        let [a, b, c] = self.tris[t].map(|i| self.pts[i]);
        in_circle(a, b, c, p) > 0.0
    }

    fn insert(&mut self, pi: usize) {
        let p = self.pts[pi];
        let start = self.locate(p);
        if self.tris[start].iter().any(|&v| self.pts[v] == p) {
            return; // duplicate point
        }
        self.epoch += 1;
        let epoch = self.epoch;
        let mut bad = vec![start];
        self.mark[start] = epoch;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let n = self.nbr[t][k];
                if n != NONE && self.mark[n] != epoch && self.circum_contains(n, p) {
                    self.mark[n] = epoch;
                    bad.push(n);
                    stack.push(n);
                }
            }
        }

        // Cavity boundary: (a, b, outside neighbour); grow until every
        // boundary edge sees p strictly on its left.
        let boundary = loop {
            let mut edges = Vec::new();
            let mut grow = None;
            for &t in &bad {
                for k in 0..3 {
                    let n = self.nbr[t][k];
                    if n != NONE && self.mark[n] == epoch {
                        continue;
                    }
                    let a = self.tris[t][(k + 1) % 3];
                    let b = self.tris[t][(k + 2) % 3];
                    if orient(self.pts[a], self.pts[b], p) <= 0.0 && n != NONE {
                        grow = Some(n);
                        break;
                    }
                    edges.push((a, b, n));
                }
                if grow.is_some() {
                    break;
                }
            }
            match grow {
                Some(n) => {
                    self.mark[n] = epoch;
                    bad.push(n);
                }
                None => break edges,
            }
        };

        for &t in &bad {
            self.alive[t] = false;
            self.free.push(t);
        }
        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, outside) in &boundary {
            let t = match self.free.pop() {
                Some(t) => {
                    self.tris[t] = [a, b, pi];
                    self.nbr[t] = [NONE, NONE, outside];
                    self.alive[t] = true;
                    t
                }
                None => {
                    self.tris.push([a, b, pi]);
                    self.nbr.push([NONE, NONE, outside]);
                    self.alive.push(true);
                    self.mark.push(0);
                    self.tris.len() - 1
                }
            };
            if outside != NONE {
                let o = self.tris[outside];
                for k in 0..3 {
                    if o[(k + 1) % 3] == b && o[(k + 2) % 3] == a {
                        self.nbr[outside][k] = t;
                    }
                }
            }
            created.push(t);
        }
        // Link the fan around p: [a, b, p] meets [b, c, p] across (b, p)
        // and [z, a, p] across (p, a).
        for &t in &created {
            let [a, b, _] = self.tris[t];
            for &u in &created {
                let [ua, ub, _] = self.tris[u];
                if ua == b {
                    self.nbr[t][0] = u;
                }
                if ub == a {
                    self.nbr[t][1] = u;
                }
            }
        }
        self.last = created[0];
    }
}

/// Delaunay triangulation of `points` (inserted in the given order).
/// Returns CCW index triples into `points`.
pub(crate) fn triangulate(points: &[Point]) -> Vec<[usize; 3]> {
    let n = points.len();
    let mut tr = Triangulation::with_super(points);
    for i in 0..n {
        tr.insert(i);
    }
    (0..tr.tris.len())
        .filter(|&t| tr.alive[t] && tr.tris[t].iter().all(|&v| v < n))
        .map(|t| tr.tris[t])
        .collect()
}

pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * (b - a).cross(c - a)
}

pub fn is_ccw(a: Point, b: Point, c: Point) -> bool {
    orient(a, b, c) > 0.0
}
