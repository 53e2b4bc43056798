use serde::{Deserialize, Serialize};

use crate::bessel::SpectralConstants;
use crate::geometry::ConvexPolygon;
use crate::mesh::TriMesh;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// `mu2 * diam^2`.
    pub scaled_mu2: f64,
    /// `4 j0^2 - mu2 diam^2`.
    pub kroger_margin: f64,
    /// `mu2 diam^2 - pi^2`. The bound is dimensionless only with the
    /// diameter squared.
    pub payne_weinberger_margin: f64,
    /// `mu2 diam^2 <= j1^2`.
    pub strong_kroger_holds: bool,
    /// `pi j'_{1,1}^2 / area - mu2`.
    pub szego_weinberger_margin: f64,
    /// `lambda1 - mu2`.
    pub polya_margin: f64,
    /// Equal to `strong_kroger_holds`: below that bound the second
    /// eigenfunction has no interior critical points.
    pub hot_spots_certified: bool,
}

pub fn inequality_checks(
    mu2: f64,
    lambda1: f64,
    poly: &ConvexPolygon,
    constants: &SpectralConstants,
) -> InequalityReport {
    let d = poly.diameter().d;
    let scaled = mu2 * d * d;
    let strong = scaled <= constants.j1 * constants.j1;
    InequalityReport {
        scaled_mu2: scaled,
        kroger_margin: 4.0 * constants.j0 * constants.j0 - scaled,
        payne_weinberger_margin: scaled - std::f64::consts::PI.powi(2),
        strong_kroger_holds: strong,
        szego_weinberger_margin: std::f64::consts::PI * constants.jp11 * constants.jp11 / poly.area() - mu2,
        polya_margin: lambda1 - mu2,
        hot_spots_certified: strong,
    }
}

/// Distance from the maximiser set of `psi` (values within `1e-9` of the
/// range from the top) to the nearest diameter endpoint, in units of the
/// inradius.
pub fn steinerberger_diagnostic(mesh: &TriMesh, psi: &[f64], poly: &ConvexPolygon) -> f64 {
    let hi = psi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = psi.iter().copied().fold(f64::INFINITY, f64::min);
    let cut = hi - 1e-9 * (hi - lo);
    let (a, b) = poly.diameter().endpoints;
    let dist = psi
        .iter()
        .zip(&mesh.vertices)
        .filter(|(&x, _)| x >= cut)
        .map(|(_, v)| v.dist(a).min(v.dist(b)))
        .fold(f64::INFINITY, f64::min);
    dist / poly.inradius().0
}
