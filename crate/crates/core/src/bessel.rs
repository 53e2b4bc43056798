//! Bessel functions of the first kind of orders zero and one, and the
//! zeros that set the scale of the exclusion region.
//!
//! Two evaluation routes are used:
//!
//! * `|x| <= 12`: the ascending power series, 40 terms, with every term and
//!   partial sum carried in double-double arithmetic. The largest term at
//!   `x = 12` is about `4.2e3` while the sum is `O(0.1)`; plain `f64`
//!   would lose about `1e-12` to cancellation, double-double loses nothing
//!   measurable.
//! * `|x| > 12`: Miller's backward recurrence on `J_n`, normalised with
//!   `J_0 + 2 (J_2 + J_4 + ...) = 1`. Absolute error stays near `1e-16`.
//!
//! Both routes agree to roughly `1e-15` at the seam `x = 12`.

use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    #[error("non-finite argument {0}")]
    NonFiniteInput(f64),
    #[error("root finder for {name} did not reach |f| <= {tol:e} (last |f| = {residual:e})")]
    ConvergenceFailure {
        name: &'static str,
        tol: f64,
        residual: f64,
    },
}

pub const SERIES_TERMS: usize = 40;
pub const SERIES_LIMIT: f64 = 12.0;

/// First positive zeros and the exclusion ratio derived from them.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralConstants {
    /// First positive zero of `J_0`.
    pub j0: f64,
    /// First positive zero of `J_1`.
    pub j1: f64,
    /// First positive zero of `J_1'`; `jp11^2` is the second Neumann
    /// eigenvalue of the unit disk.
    pub jp11: f64,
    /// `j1 / (2 j0)`.
    pub c_excl: f64,
}

// Minimal double-double arithmetic: value = hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd {
            hi: s,
            lo: b - (s - a),
        }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let s = Dd::quick_two_sum(s.hi, s.lo + t.hi);
        Dd::quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        let lo = p.lo + (self.hi * o.lo + self.lo * o.hi);
        Dd::quick_two_sum(p.hi, lo)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self.add(Dd::two_prod(q1, d).neg());
        let q2 = r.hi / d;
        let r = r.add(Dd::two_prod(q2, d).neg());
        let q3 = r.hi / d;
        Dd::quick_two_sum(q1, q2).add(Dd::from_f64(q3))
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `J_order(x)` by the ascending series, 40 terms, double-double.
pub(crate) fn series(order: u32, x: f64) -> f64 {
    let half = Dd::from_f64(x).div_f64(2.0);
    let q = half.mul(half).neg();
    // leading term (x/2)^order / order!
    let mut term = Dd::from_f64(1.0);
    for k in 1..=order {
        term = term.mul(half).div_f64(k as f64);
    }
    let mut sum = term;
    for k in 1..SERIES_TERMS {
        let denom = (k as f64) * ((k as u32 + order) as f64);
        term = term.mul(q).div_f64(denom);
        sum = sum.add(term);
    }
    sum.to_f64()
}

/// `(J_0(x), J_1(x))` by Miller's backward recurrence, `x > 0`.
pub(crate) fn miller(x: f64) -> (f64, f64) {
    // J_n(x) is negligible once n exceeds x by a few multiples of x^(1/3).
    let start = (x + 40.0 + 12.0 * x.cbrt()).ceil() as usize;
    let start = start + start % 2;
    let mut next = 0.0_f64; // J_{n+1}
    let mut cur = 1e-300_f64; // J_n
    let mut norm = 0.0_f64;
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    let two_over_x = 2.0 / x;
    for n in (1..=start).rev() {
        let prev = (n as f64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds J_{n-1}
        let m = n - 1;
        if m == 1 {
            j1 = cur;
        }
        if m == 0 {
            j0 = cur;
            norm += cur;
        } else if m % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j0 *= 1e-250;
            j1 *= 1e-250;
        }
    }
    (j0 / norm, j1 / norm)
}

/// Unchecked `J_0`; NaN propagates.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        series(0, ax)
    } else {
        miller(ax).0
    }
}

/// Unchecked `J_1`; odd in `x`.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        series(1, ax)
    } else {
        miller(ax).1
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J_2` from the three-term recurrence `J_2 = (2/x) J_1 - J_0`.
pub fn bessel_j2(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        // avoid 0/0; leading series terms
        let q = x * x / 4.0;
        return q / 2.0 * (1.0 - q / 3.0);
    }
    2.0 / x * bessel_j1(x) - bessel_j0(x)
}

fn check(x: f64) -> Result<f64, BesselError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(BesselError::NonFiniteInput(x))
    }
}

pub fn j0_eval(x: f64) -> Result<f64, BesselError> {
    check(x).map(bessel_j0)
}

pub fn j1_eval(x: f64) -> Result<f64, BesselError> {
    check(x).map(bessel_j1)
}

/// `J_0'(x) = -J_1(x)`.
pub fn j0_derivative(x: f64) -> Result<f64, BesselError> {
    check(x).map(|x| -bessel_j1(x))
}

/// `J_1'(x) = J_0(x) - J_1(x)/x`.
fn j1_prime(x: f64) -> f64 {
    bessel_j0(x) - bessel_j1(x) / x
}

/// `J_1''` from Bessel's equation of order one.
fn j1_second(x: f64) -> f64 {
    -j1_prime(x) / x - (1.0 - 1.0 / (x * x)) * bessel_j1(x)
}

const ROOT_TOL: f64 = 1e-13;
const NEWTON_MAX: usize = 100;

/// Bisection down to a bracket of width 1e-3, then safeguarded Newton
/// until `|f| <= 1e-13`.
fn find_root(
    name: &'static str,
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64, BesselError> {
    let mut flo = f(lo);
    debug_assert!(flo * f(hi) < 0.0, "bad bracket for {name}");
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x);
    for _ in 0..NEWTON_MAX {
        if fx.abs() <= ROOT_TOL {
            return Ok(x);
        }
        let step = fx / df(x);
        let mut next = x - step;
        if !(lo..=hi).contains(&next) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        x = next;
        fx = f(x);
        if (fx < 0.0) == (flo < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
    }
    if fx.abs() <= ROOT_TOL {
        Ok(x)
    } else {
        Err(BesselError::ConvergenceFailure {
            name,
            tol: ROOT_TOL,
            residual: fx.abs(),
        })
    }
}

/// Locate `j0`, `j1`, `j'_{1,1}` from fixed brackets `[2,3]`, `[3,4]`, `[1,2]`.
pub fn find_constants() -> Result<SpectralConstants, BesselError> {
    let j0 = find_root("j0", bessel_j0, |x| -bessel_j1(x), 2.0, 3.0)?;
    let j1 = find_root("j1", bessel_j1, j1_prime, 3.0, 4.0)?;
    let jp11 = find_root("jp11", j1_prime, j1_second, 1.0, 2.0)?;
    Ok(SpectralConstants {
        j0,
        j1,
        jp11,
        c_excl: j1 / (2.0 * j0),
    })
}

/// Process-wide cached constants.
pub fn spectral_constants() -> &'static SpectralConstants {
    static CONSTANTS: OnceLock<SpectralConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| find_constants().expect("Bessel evaluator is broken"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(j0_eval(0.0).unwrap(), 1.0);
        assert_eq!(j1_eval(0.0).unwrap(), 0.0);
        assert_eq!(j0_derivative(0.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(j0_eval(f64::NAN), Err(BesselError::NonFiniteInput(_))));
        assert!(matches!(
            j1_eval(f64::INFINITY),
            Err(BesselError::NonFiniteInput(_))
        ));
        assert!(j0_derivative(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn values_at_two() {
        assert!((j0_eval(2.0).unwrap() - 0.2238907791).abs() < 1e-9);
        assert!((j1_eval(2.0).unwrap() - 0.5767248078).abs() < 1e-9);
        assert!((j0_derivative(2.0).unwrap() + 0.5767248078).abs() < 1e-9);
    }

    #[test]
    fn constants_and_residuals() {
        let c = find_constants().unwrap();
        assert!((c.j0 - 2.404825557695773).abs() < 1e-12);
        assert!((c.j1 - 3.831705970207512).abs() < 1e-12);
        assert!((c.jp11 - 1.841183781340659).abs() < 1e-12);
        assert!((c.c_excl - 0.796670).abs() < 1e-6);
        assert_eq!(c.c_excl, c.j1 / (2.0 * c.j0));
        assert!(bessel_j0(c.j0).abs() <= 1e-12);
        assert!(bessel_j1(c.j1).abs() <= 1e-12);
        assert!(j0_derivative(c.j1).unwrap().abs() <= 1e-12);
        assert!(2.404 < c.j0 && c.j0 < 2.405);
        assert!(3.831 < c.j1 && c.j1 < 3.832);
        assert!(0.796 < c.c_excl && c.c_excl < 0.797);
    }

    #[test]
    fn seam_continuity() {
        for order in 0..2u32 {
            let s = series(order, SERIES_LIMIT);
            let (m0, m1) = miller(SERIES_LIMIT);
            let m = if order == 0 { m0 } else { m1 };
            assert!((s - m).abs() <= 1e-11, "order {order}: {s} vs {m}");
        }
        let below = bessel_j0(SERIES_LIMIT);
        let above = bessel_j0(SERIES_LIMIT + 1e-12);
        assert!((below - above).abs() <= 1e-11);
    }

    #[test]
    fn derivative_sign_on_first_interval() {
        let j1 = spectral_constants().j1;
        for i in 0..100 {
            let x = 0.01 + (j1 - 0.02) * i as f64 / 99.0;
            assert!(j0_derivative(x).unwrap() < 0.0, "x = {x}");
        }
    }

    #[test]
    fn bessel_ode_residual() {
        for i in 0..100 {
            let x = 0.1 + 19.9 * (i as f64 + 0.5) / 100.0;
            let j0 = bessel_j0(x);
            let d1 = -bessel_j1(x);
            let d2 = (bessel_j2(x) - j0) / 2.0;
            let r = x * x * d2 + x * d1 + x * x * j0;
            assert!(r.abs() <= 1e-8, "x = {x}, residual {r}");
        }
    }

    #[test]
    fn parity() {
        assert_eq!(bessel_j0(-3.3), bessel_j0(3.3));
        assert_eq!(bessel_j1(-3.3), -bessel_j1(3.3));
    }
}
