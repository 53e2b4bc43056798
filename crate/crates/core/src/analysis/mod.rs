//! Second-eigenfunction diagnostics: discrete critical points, the Bessel
//! comparison field `w = psi(x0) J0(sqrt(mu) |x - x0|) - psi`, its nodal
//! structure and boundary flux, energy checks, and the inequality suite.

mod comparison;
mod critical;
mod energy;
mod inequalities;
mod nodal;

pub use comparison::{
    boundary_flux, branch_count, build_comparison, support_positivity, BoundaryFlux,
    ComparisonField, BRANCH_SAMPLES,
};
pub use critical::{
    find_critical_points, global_extrema, theorem_check, CriticalKind, CriticalPoint, Extremum,
    TheoremVerdict,
};
pub use energy::{rayleigh_defect, zero_mean_quotient, RayleighDefect};
pub use inequalities::{inequality_checks, steinerberger_diagnostic, InequalityReport};
pub use nodal::{nodal_decomposition, NodalComponent, NodalDecomposition};

use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("anchor {0:?} is not a mesh vertex")]
    AnchorNotVertex(Point),
    #[error("circle of radius {radius} about the anchor leaves the domain (clearance {clearance})")]
    CircleOutsideDomain { radius: f64, clearance: f64 },
    #[error("sampling radius {radius} is below 3 h_max = {min}")]
    RadiusTooSmall { radius: f64, min: f64 },
    #[error("anchor lies on the boundary")]
    AnchorOnBoundary,
    #[error("component {0} is not a positive nodal domain")]
    NotPositiveComponent(usize),
    #[error("vector length {found} does not match mesh vertex count {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

pub(crate) fn check_len(expected: usize, v: &[f64]) -> Result<(), AnalysisError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(AnalysisError::LengthMismatch {
            expected,
            found: v.len(),
        })
    }
}

pub(crate) fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
