//! Minimum enclosing circle (Welzl, iterative move-to-front form).

use super::{Circle, Point};
use crate::rng::SplitMix64;

fn circle_two(a: Point, b: Point) -> Circle {
    Circle::from_diameter(a, b)
}

fn circle_three(a: Point, b: Point, c: Point) -> Circle {
    match Circle::circumcircle(a, b, c) {
        Some(circle) => circle,
        None => {
            // collinear: the widest pair spans the rest
            let pairs = [(a, b), (a, c), (b, c)];
            let (p, q) = pairs
                .into_iter()
                .max_by(|x, y| x.0.dist2(x.1).total_cmp(&y.0.dist2(y.1)))
                .unwrap();
            circle_two(p, q)
        }
    }
}

/// Smallest circle containing every point. Input order is shuffled with a
/// fixed seed, so the result is deterministic.
pub fn min_enclosing_circle(points: &[Point]) -> Circle {
    assert!(!points.is_empty());
    let mut pts = points.to_vec();
    let mut rng = SplitMix64::new(0x5EED_C1C1E);
    for i in (1..pts.len()).rev() {
        let j = rng.below(i + 1);
        pts.swap(i, j);
    }
    let scale = {
        let mut r: f64 = 0.0;
        for p in &pts {
            r = r.max(p.dist(pts[0]));
        }
        r.max(f64::MIN_POSITIVE)
    };
    let slack = 1e-12 * scale;

    let mut c = Circle {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if c.contains(pts[i], slack) {
            continue;
        }
        c = Circle {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(pts[j], slack) {
                continue;
            }
            c = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if c.contains(pts[k], slack) {
                    continue;
                }
                c = circle_three(pts[i], pts[j], pts[k]);
            }
        }
    }
    c
}
