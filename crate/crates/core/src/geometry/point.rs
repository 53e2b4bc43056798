use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2-D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    /// Rotate by -90 degrees; for a CCW edge direction this is the outward normal.
    pub fn perp_right(self) -> Point {
        Point::new(self.y, -self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point, slack: f64) -> bool {
        p.dist(self.center) <= self.radius + slack
    }

    pub fn from_diameter(a: Point, b: Point) -> Circle {
        let center = a.midpoint(b);
        Circle {
            center,
            radius: a.dist(b) * 0.5,
        }
    }

    /// Circumcircle, or `None` when the points are (numerically) collinear.
    pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<Circle> {
        let ab = b - a;
        let ac = c - a;
        let d = 2.0 * ab.cross(ac);
        let scale = ab.norm2().max(ac.norm2());
        if d.abs() <= 1e-14 * scale {
            return None;
        }
        let ux = (ac.y * ab.norm2() - ab.y * ac.norm2()) / d;
        let uy = (ab.x * ac.norm2() - ac.x * ab.norm2()) / d;
        let offset = Point::new(ux, uy);
        Some(Circle {
            center: a + offset,
            radius: offset.norm(),
        })
    }
}
