//! The `report.json` document written by `verify`.
//!
//! Numbers are written by `serde_json`, which emits the shortest decimal
//! string that parses back to the same double, so every value round-trips
//! exactly. Wall-clock timings are kept out of the report (they go to a
//! sidecar `timings.json`) so identical runs give identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{CriticalPoint, Extremum, InequalityReport, RayleighDefect, TheoremVerdict};
use crate::geometry::Point;
use crate::mesh::MeshQuality;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    /// The domain spec as read, in its JSON form.
    pub domain: serde_json::Value,
    pub parameters: Parameters,
    /// Non-fatal notes, e.g. defaults filled into the spec.
    pub warnings: Vec<String>,
    pub geometry: GeometrySummary,
    pub mesh: MeshQuality,
    pub spectrum: SpectrumSummary,
    pub inequalities: InequalityReport,
    /// Global max and min of the primary eigenvector.
    pub boundary_extrema: Vec<Extremum>,
    /// Interior critical vertices over all analysed eigenvectors, plus any
    /// planted points.
    pub interior_critical_points: Vec<SampledCriticalPoint>,
    pub verdict: TheoremVerdict,
    /// Per analysed eigenvector: every sign component of `psi` reaches the
    /// boundary.
    pub nodal_components_touch_boundary: Vec<bool>,
    pub diagnostics: Vec<AnchorDiagnostic>,
    /// Per analysed eigenvector.
    pub steinerberger: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub h: f64,
    pub refinements: u32,
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    pub planted: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub vertex_count: usize,
    pub diameter: f64,
    pub diameter_endpoints: [Point; 2],
    pub inradius: f64,
    pub inradius_center: Point,
    pub area: f64,
    pub mec_center: Point,
    pub mec_radius: f64,
    pub c_excl: f64,
    /// `c_excl * diameter`.
    pub exclusion_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    /// Neumann `mu_1 .. mu_k`, ascending.
    pub neumann: Vec<f64>,
    pub neumann_residuals: Vec<f64>,
    pub neumann_iterations: usize,
    /// First Dirichlet eigenvalue.
    pub lambda1: f64,
    pub dirichlet_residual: f64,
    /// `(mu_3 - mu_2) / mu_2 < 1e-6`.
    pub degenerate: bool,
    /// Eigenvectors analysed: `psi_2`, or the eigenspace basis plus random
    /// unit combinations when degenerate.
    pub analyzed_vectors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCriticalPoint {
    /// Index of the analysed eigenvector, `None` for planted points.
    pub sample: Option<usize>,
    pub point: CriticalPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorDiagnostic {
    pub sample: usize,
    pub anchor: Point,
    pub anchor_vertex: usize,
    /// No interior critical vertex existed; the anchor is the interior
    /// vertex nearest the minimum enclosing circle center.
    pub diagnostic_only: bool,
    pub psi_at_anchor: f64,
    /// `sqrt(mu2) * F(anchor)`; the flux sign argument needs `<= j1`.
    pub scaled_farthest_distance: f64,
    pub support_positivity: f64,
    pub branch_radius: Option<f64>,
    pub branch_count: Option<usize>,
    pub flux_min: f64,
    pub flux_max: f64,
    /// The hypotheses of the flux sign argument hold at this anchor.
    pub flux_sign_applicable: bool,
    pub flux_nonpositive: bool,
    pub nodal_components: usize,
    pub positive_components: usize,
    pub nodal_components_touch_boundary: Vec<bool>,
    pub rayleigh_defects: Vec<RayleighDefect>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    /// `(stage, milliseconds)` in execution order.
    pub stages: Vec<(String, f64)>,
}

impl Timings {
    pub fn record<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = std::time::Instant::now();
        let out = f();
        self.stages.push((stage.to_string(), t.elapsed().as_secs_f64() * 1e3));
        out
    }
}

impl VerificationReport {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn read(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    /// Every number in the report is finite. `serde_json` turns NaN and
    /// infinities into `null`, so any `null` outside an optional field
    /// means a non-finite value.
    pub fn all_finite(&self) -> bool {
        const OPTIONAL: [&str; 4] = ["sample", "branch_radius", "branch_count", "combination_quotient"];
        fn walk(key: &str, v: &serde_json::Value) -> bool {
            match v {
                serde_json::Value::Null => OPTIONAL.contains(&key),
                serde_json::Value::Number(n) => n.as_f64().is_some_and(f64::is_finite),
                serde_json::Value::Array(a) => a.iter().all(|x| walk(key, x)),
                serde_json::Value::Object(o) => o.iter().all(|(k, x)| walk(k, x)),
                _ => true,
            }
        }
        walk("", &serde_json::to_value(self).expect("report serializes"))
    }
}
