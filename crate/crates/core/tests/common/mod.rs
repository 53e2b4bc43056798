//! Oracles shared by the integration tests.
#![allow(dead_code)]

use hotspots::domain::{convex_hull, DomainSpec};
use hotspots::geometry::{Circle, ConvexPolygon, Point};
use hotspots::rng::SplitMix64;

/// Hull of random points in a random box, or a stratified random polygon.
pub fn random_polygon(seed: u64) -> ConvexPolygon {
    let mut g = SplitMix64::new(seed);
    if seed.is_multiple_of(3) {
        let n = 5 + g.below(40);
        return DomainSpec::random_convex(seed, n).realize().unwrap();
    }
    loop {
        let m = 3 + g.below(60);
        let (sx, sy) = (g.uniform(0.1, 10.0), g.uniform(0.1, 10.0));
        let (ox, oy) = (g.uniform(-100.0, 100.0), g.uniform(-100.0, 100.0));
        let pts: Vec<Point> = (0..m)
            .map(|_| Point::new(ox + sx * g.uniform(-1.0, 1.0), oy + sy * g.uniform(-1.0, 1.0)))
            .collect();
        if let Ok(p) = ConvexPolygon::validate(&convex_hull(&pts)) {
            return p;
        }
    }
}

pub fn brute_diameter2(v: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].dist2(v[j]));
        }
    }
    best
}

/// Smallest circle among all two- and three-point candidates that covers
/// every point.
pub fn brute_mec(v: &[Point]) -> Circle {
    let scale = v.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(1.0);
    let covers = |c: &Circle| v.iter().all(|p| p.dist(c.center) <= c.radius * (1.0 + 1e-12) + 1e-12 * scale);
    let mut best: Option<Circle> = None;
    let mut offer = |c: Circle| {
        if best.as_ref().is_none_or(|b| c.radius < b.radius) && covers(&c) {
            best = Some(c);
        }
    };
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            offer(Circle::from_diameter(v[i], v[j]));
            for k in j + 1..v.len() {
                if let Some(c) = Circle::circumcircle(v[i], v[j], v[k]) {
                    offer(c);
                }
            }
        }
    }
    best.unwrap()
}

/// Unevaluated sum `hi + lo`.
#[derive(Clone, Copy)]
struct D(f64, f64);

fn two_sum(a: f64, b: f64) -> D {
    let s = a + b;
    let bb = s - a;
    D(s, (a - (s - bb)) + (b - bb))
}

fn add(a: D, b: D) -> D {
    let s = two_sum(a.0, b.0);
    let lo = s.1 + a.1 + b.1;
    let hi = s.0 + lo;
    D(hi, lo - (hi - s.0))
}

fn mul_f(a: D, b: f64) -> D {
    let p = a.0 * b;
    let e = a.0.mul_add(b, -p);
    let lo = e + a.1 * b;
    let hi = p + lo;
    D(hi, lo - (hi - p))
}

fn div_f(a: D, b: f64) -> D {
    let q = a.0 / b;
    // remainder a - q*b, exact part via fma
    let r = a.0 - q * b;
    let r = r + (-(q.mul_add(b, -(q * b)))) + a.1;
    let lo = r / b;
    let hi = q + lo;
    D(hi, lo - (hi - q))
}

/// `J_nu(x)` for `nu` in {0, 1}: `sum (-1)^k (x/2)^(2k+nu) / (k! (k+nu)!)`.
pub fn oracle(nu: u32, x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = if nu == 0 { D(1.0, 0.0) } else { D(x / 2.0, 0.0) };
    let mut sum = term;
    for k in 1..400u32 {
        term = div_f(mul_f(term, -q), (k * (k + nu)) as f64);
        sum = add(sum, term);
        if term.0.abs() < 1e-40 * sum.0.abs().max(1e-300) {
            break;
        }
    }
    sum.0 + sum.1
}

pub fn oracle_j1_prime(x: f64) -> f64 {
    oracle(0, x) - oracle(1, x) / x
}

pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

