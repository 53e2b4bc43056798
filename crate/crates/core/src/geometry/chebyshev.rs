//! Largest inscribed circle (Chebyshev center) by a small dense simplex.
//!
//! With the polygon translated so its centroid is the origin, the problem
//!
//! ```text
//! maximize rho  subject to  n_i . c + rho <= b_i   (one row per edge)
//! ```
//!
//! has `b_i > 0`, so the all-slack basis is feasible. The free center
//! coordinates are split as `c = c+ - c-`. Bland's rule guards against
//! cycling on the degenerate vertices that symmetric polygons produce.

use super::{ConvexPolygon, Point};

const EPS: f64 = 1e-12;

/// Dense tableau for `max c^T x, A x <= b, x >= 0` with `b >= 0`.
struct Tableau {
    rows: usize,
    cols: usize, // structural + slack
    data: Vec<f64>, // (rows + 1) x (cols + 1); last row is the objective, last column the rhs
    basis: Vec<usize>,
}

impl Tableau {
    fn new(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Tableau {
        let rows = a.len();
        let nstruct = c.len();
        let cols = nstruct + rows;
        let width = cols + 1;
        let mut data = vec![0.0; (rows + 1) * width];
        for (r, row) in a.iter().enumerate() {
            data[r * width..r * width + nstruct].copy_from_slice(row);
            data[r * width + nstruct + r] = 1.0;
            data[r * width + cols] = b[r];
        }
        for (j, cj) in c.iter().enumerate() {
            data[rows * width + j] = -cj;
        }
        Tableau {
            rows,
            cols,
            data,
            basis: (nstruct..cols).collect(),
        }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.cols + 1;
        let inv = 1.0 / self.at(pr, pc);
        for c in 0..width {
            self.data[pr * width + c] *= inv;
        }
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                for c in 0..width {
                    let v = self.data[pr * width + c];
                    self.data[r * width + c] -= f * v;
                }
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs to optimality; returns the primal solution of the structural columns.
    fn solve(&mut self, nstruct: usize) -> Vec<f64> {
        let max_pivots = 50 * (self.rows + self.cols);
        for _ in 0..max_pivots {
            // Bland: lowest-index improving column
            let Some(pc) = (0..self.cols).find(|&c| self.at(self.rows, c) < -EPS) else {
                break;
            };
            let mut best: Option<(f64, usize)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > EPS {
                    let ratio = self.at(r, self.cols) / a;
                    best = match best {
                        None => Some((ratio, r)),
                        Some((br, brow)) => {
                            if ratio < br - EPS
                                || (ratio <= br + EPS && self.basis[r] < self.basis[brow])
                            {
                                Some((ratio, r))
                            } else {
                                Some((br, brow))
                            }
                        }
                    };
                }
            }
            match best {
                Some((_, pr)) => self.pivot(pr, pc),
                // bounded by construction (rho <= every b_i)
                None => break,
            }
        }
        let mut x = vec![0.0; nstruct];
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv < nstruct {
                x[bv] = self.at(r, self.cols);
            }
        }
        x
    }
}

/// Inradius and a Chebyshev center.
pub fn inradius(poly: &ConvexPolygon) -> (f64, Point) {
    let origin = poly.centroid();
    let n = poly.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let nrm = poly.edge_normal(i);
        a.push(vec![nrm.x, -nrm.x, nrm.y, -nrm.y, 1.0]);
        b.push(poly.edge_clearance(i, origin).max(0.0));
    }
    let mut t = Tableau::new(&a, &b, &[0.0, 0.0, 0.0, 0.0, 1.0]);
    let x = t.solve(5);
    let center = origin + Point::new(x[0] - x[1], x[2] - x[3]);
    // Report the exact clearance of the returned center rather than the
    // LP's rho, which can carry pivoting roundoff.
    let rho = poly.clearance(center);
    (rho, center)
}
