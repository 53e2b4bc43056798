//! The `verify` pipeline: domain, mesh, spectra, geometry, critical points,
//! theorem check, comparison-field diagnostics and inequalities.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::{
    boundary_flux, branch_count, build_comparison, find_critical_points, global_extrema,
    inequality_checks, nodal_decomposition, rayleigh_defect, steinerberger_diagnostic,
    support_positivity, theorem_check, CriticalKind, CriticalPoint, NodalDecomposition,
};
use crate::bessel::spectral_constants;
use crate::domain::{load_spec, DomainError, DomainSpec};
use crate::fem::{assemble_mass, assemble_stiffness, solve_dirichlet, solve_neumann_seeded, SolverError, SparseSym};
use crate::geometry::{exclusion_region, ConvexPolygon, ExclusionRegion, GeometryError, Point};
use crate::mesh::{generate, write_mesh_dump, MeshError, TriMesh};
use crate::report::{
    AnchorDiagnostic, GeometrySummary, Parameters, SampledCriticalPoint, SpectrumSummary, Timings,
    VerificationReport, REPORT_SCHEMA_VERSION,
};
use crate::rng::SplitMix64;
use crate::svg::{render_svg, Scene, SvgOptions};

/// Relative eigenvalue gap below which `mu_2` is treated as degenerate.
pub const DEGENERACY_REL_GAP: f64 = 1e-6;
/// Random unit combinations sampled from a degenerate eigenspace.
pub const EIGENSPACE_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub h: f64,
    pub refinements: u32,
    /// Neumann eigenpairs to compute (at least 3).
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    /// Synthetic critical points added to the theorem check.
    pub planted: Vec<Point>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            h: 0.02,
            refinements: 0,
            k: 3,
            tol: crate::fem::DEFAULT_TOL,
            seed: 0,
            planted: Vec::new(),
        }
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{0}")]
    Options(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Error)]
#[error("stage `{stage}` failed: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: StageError,
}

impl PipelineError {
    fn at(stage: &'static str) -> impl FnOnce(StageError) -> PipelineError {
        move |source| PipelineError { stage, source }
    }

    /// 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match &self.source {
            StageError::Domain(_) | StageError::Geometry(_) | StageError::Options(_) | StageError::Io { .. } => 1,
            StageError::Mesh(MeshError::InvalidH { .. }) => 1,
            StageError::Mesh(_) | StageError::Solver(_) => 2,
        }
    }
}

fn stage<T, E: Into<StageError>>(name: &'static str, r: Result<T, E>) -> Result<T, PipelineError> {
    r.map_err(|e| PipelineError::at(name)(e.into()))
}

/// Everything computed by one verification run.
#[derive(Debug, Clone)]
pub struct VerifyOutput {
    pub report: VerificationReport,
    pub timings: Timings,
    pub polygon: ConvexPolygon,
    pub region: ExclusionRegion,
    pub mesh: TriMesh,
    /// The analysed eigenvectors; the first is the computed `psi_2`.
    pub samples: Vec<Vec<f64>>,
    /// Zero set of the first analysed eigenvector.
    pub nodal: NodalDecomposition,
}

impl VerifyOutput {
    /// Exit status of the run: 0 if the verdict passes, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.verdict.pass {
            0
        } else {
            3
        }
    }

    pub fn scene(&self, options: SvgOptions) -> Scene<'_> {
        Scene {
            polygon: &self.polygon,
            region: &self.region,
            critical_points: self.report.interior_critical_points.iter().map(|c| c.point.location).collect(),
            boundary_extrema: self.report.boundary_extrema.iter().map(|e| e.location).collect(),
            nodal: options.show_nodal.then_some(&self.nodal.segments[..]),
            mesh: options.show_mesh.then_some(&self.mesh),
        }
    }
}

/// Vectors to analyse: `psi_2`, or for a degenerate pair the basis of the
/// eigenspace followed by seeded random unit combinations.
fn eigenspace_samples(v2: &[f64], v3: Option<&[f64]>, degenerate: bool, seed: u64) -> Vec<Vec<f64>> {
    let mut out = vec![v2.to_vec()];
    if let (true, Some(v3)) = (degenerate, v3) {
        out.push(v3.to_vec());
        let mut rng = SplitMix64::new(seed);
        for _ in 0..EIGENSPACE_SAMPLES {
            let t = rng.uniform(0.0, std::f64::consts::TAU);
            let (c, s) = (t.cos(), t.sin());
            out.push(v2.iter().zip(v3).map(|(a, b)| c * a + s * b).collect());
        }
    }
    out
}

struct Context<'a> {
    mesh: &'a TriMesh,
    k: &'a SparseSym,
    m: &'a SparseSym,
    mu2: f64,
}

fn anchor_diagnostic(ctx: &Context, psi: &[f64], sample: usize, x0: Point, diagnostic_only: bool) -> AnchorDiagnostic {
    let mesh = ctx.mesh;
    let poly = &mesh.polygon;
    let field = build_comparison(mesh, psi, ctx.mu2, x0).expect("anchor is a mesh vertex");
    let farthest = poly.farthest_boundary_distance(field.anchor);
    let scaled = ctx.mu2.sqrt() * farthest;
    let support = support_positivity(poly, field.anchor);

    let clearance = poly.clearance(field.anchor);
    let radius = (0.5 * clearance).min(6.0 * mesh.h_max);
    let (branch_radius, branches) = match branch_count(mesh, &field, radius) {
        Ok(n) => (Some(radius), Some(n)),
        Err(_) => (None, None),
    };

    let flux = boundary_flux(&field, mesh).expect("anchor is interior");
    let flux_min = flux.iter().map(|f| f.value).fold(f64::INFINITY, f64::min);
    let flux_max = flux.iter().map(|f| f.value).fold(f64::NEG_INFINITY, f64::max);
    let applicable = scaled <= spectral_constants().j1 && support > 0.0 && field.psi_at_anchor >= 0.0;

    let nd = nodal_decomposition(mesh, &field.values);
    let defects = (0..nd.components.len())
        .filter(|&c| nd.components[c].sign > 0)
        .filter_map(|c| rayleigh_defect(mesh, ctx.k, ctx.m, &field, &nd, c, &flux).ok())
        .collect();
    AnchorDiagnostic {
        sample,
        anchor: field.anchor,
        anchor_vertex: field.anchor_vertex,
        diagnostic_only,
        psi_at_anchor: field.psi_at_anchor,
        scaled_farthest_distance: scaled,
        support_positivity: support,
        branch_radius,
        branch_count: branches,
        flux_min,
        flux_max,
        flux_sign_applicable: applicable,
        flux_nonpositive: flux_max <= 1e-10 * poly.scale(),
        nodal_components: nd.components.len(),
        positive_components: nd.positive_component_count,
        nodal_components_touch_boundary: nd.components.iter().map(|c| c.touches_boundary).collect(),
        rayleigh_defects: defects,
    }
}

/// Run the full pipeline on an in-memory spec.
pub fn verify(spec: &DomainSpec, opts: &VerifyOptions) -> Result<VerifyOutput, PipelineError> {
    if opts.k < 3 {
        return Err(PipelineError::at("options")(StageError::Options(format!(
            "k = {} but at least 3 Neumann eigenpairs are needed",
            opts.k
        ))));
    }
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(PipelineError::at("options")(StageError::Options(format!(
            "tol = {} must lie in (0, 1)",
            opts.tol
        ))));
    }
    let constants = spectral_constants();
    let mut timings = Timings::default();

    let polygon = stage("realize", timings.record("realize", || spec.realize()))?;
    let mesh = stage(
        "mesh",
        timings.record("mesh", || {
            generate(&polygon, opts.h).map(|mut m| {
                for _ in 0..opts.refinements {
                    m = m.refine();
                }
                m
            })
        }),
    )?;
    let (k, m) = timings.record("assemble", || (assemble_stiffness(&mesh), assemble_mass(&mesh, false)));
    let neumann = stage(
        "neumann",
        timings.record("neumann", || solve_neumann_seeded(&k, &m, opts.k, opts.tol, crate::fem::DEFAULT_SEED)),
    )?;
    let dirichlet = stage("dirichlet", timings.record("dirichlet", || solve_dirichlet(&mesh, 1, opts.tol)))?;

    let diam = polygon.diameter();
    let (inradius, inradius_center) = polygon.inradius();
    let mec = polygon.min_enclosing_circle();
    let region = stage("region", timings.record("region", || exclusion_region(&polygon, constants.c_excl)))?;

    let mu = &neumann.eigenvalues;
    let mu2 = mu[1];
    let degenerate = (mu[2] - mu2) / mu2 < DEGENERACY_REL_GAP;
    let samples = eigenspace_samples(
        &neumann.eigenvectors[1],
        neumann.eigenvectors.get(2).map(Vec::as_slice),
        degenerate,
        opts.seed,
    );
    let lambda1 = dirichlet.eigenvalues[0];

    let ctx = Context {
        mesh: &mesh,
        k: &k,
        m: &m,
        mu2,
    };
    let mut critical: Vec<SampledCriticalPoint> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut touching = Vec::new();
    let mut steinerberger = Vec::new();
    let mut primary_nodal = None;
    timings.record("analysis", || {
        for (i, psi) in samples.iter().enumerate() {
            let cps = find_critical_points(&mesh, psi);
            let nd = nodal_decomposition(&mesh, psi);
            touching.push(nd.all_touch_boundary());
            if i == 0 {
                primary_nodal = Some(nd);
            }
            steinerberger.push(steinerberger_diagnostic(&mesh, psi, &polygon));
            if cps.is_empty() {
                let v = mesh.nearest_interior_vertex(mec.center).expect("mesh has interior vertices");
                diagnostics.push(anchor_diagnostic(&ctx, psi, i, mesh.vertices[v], true));
            }
            for cp in &cps {
                diagnostics.push(anchor_diagnostic(&ctx, psi, i, cp.location, false));
            }
            critical.extend(cps.into_iter().map(|point| SampledCriticalPoint { sample: Some(i), point }));
        }
    });
    for &p in &opts.planted {
        let v = mesh.nearest_vertex(p);
        critical.push(SampledCriticalPoint {
            sample: None,
            point: CriticalPoint {
                vertex_id: v,
                location: p,
                value: samples[0][v],
                kind: CriticalKind::Saddle,
                alternations: 4,
                farthest_distance: polygon.farthest_boundary_distance(p),
            },
        });
    }
    let points: Vec<CriticalPoint> = critical.iter().map(|c| c.point.clone()).collect();
    let verdict = theorem_check(&points, &polygon, constants, mesh.h_max);
    let inequalities = inequality_checks(mu2, lambda1, &polygon, constants);

    let report = VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        domain: spec.to_json(),
        parameters: Parameters {
            h: opts.h,
            refinements: opts.refinements,
            k: opts.k,
            tol: opts.tol,
            seed: opts.seed,
            planted: opts.planted.clone(),
        },
        warnings: Vec::new(),
        geometry: GeometrySummary {
            vertex_count: polygon.len(),
            diameter: diam.d,
            diameter_endpoints: [diam.endpoints.0, diam.endpoints.1],
            inradius,
            inradius_center,
            area: polygon.area(),
            mec_center: mec.center,
            mec_radius: mec.radius,
            c_excl: constants.c_excl,
            exclusion_threshold: region.threshold,
        },
        mesh: mesh.quality(),
        spectrum: SpectrumSummary {
            neumann: neumann.eigenvalues.clone(),
            neumann_residuals: neumann.residuals.clone(),
            neumann_iterations: neumann.iterations,
            lambda1,
            dirichlet_residual: dirichlet.residuals[0],
            degenerate,
            analyzed_vectors: samples.len(),
        },
        inequalities,
        boundary_extrema: global_extrema(&mesh, &samples[0]),
        interior_critical_points: critical,
        verdict,
        nodal_components_touch_boundary: touching,
        diagnostics,
        steinerberger,
    };
    Ok(VerifyOutput {
        report,
        timings,
        polygon,
        region,
        mesh,
        samples,
        nodal: primary_nodal.expect("at least one sample"),
    })
}

fn write(path: PathBuf, contents: &str) -> Result<(), PipelineError> {
    std::fs::write(&path, contents).map_err(|source| PipelineError::at("write")(StageError::Io { path, source }))
}

/// Files written by [`write_outputs`].
pub const REPORT_FILE: &str = "report.json";
pub const TIMINGS_FILE: &str = "timings.json";
pub const FIGURE_FILE: &str = "figure.svg";
pub const MESH_FILE: &str = "mesh.txt";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutputOptions {
    pub svg: SvgOptions,
    pub mesh_dump: bool,
}

/// Write `report.json`, `timings.json`, `figure.svg` and optionally the
/// mesh dump into `out_dir`.
pub fn write_outputs(out: &VerifyOutput, out_dir: &Path, options: OutputOptions) -> Result<(), PipelineError> {
    std::fs::create_dir_all(out_dir).map_err(|source| {
        PipelineError::at("write")(StageError::Io {
            path: out_dir.to_path_buf(),
            source,
        })
    })?;
    write(out_dir.join(REPORT_FILE), &out.report.to_json_string())?;
    let timings = serde_json::to_string_pretty(&out.timings).expect("timings serialize");
    write(out_dir.join(TIMINGS_FILE), &(timings + "\n"))?;
    write(out_dir.join(FIGURE_FILE), &render_svg(&out.scene(options.svg)))?;
    if options.mesh_dump {
        write(out_dir.join(MESH_FILE), &write_mesh_dump(&out.mesh.vertices, &out.mesh.triangles))?;
    }
    Ok(())
}

/// Load a spec file, run [`verify`] and write the outputs.
pub fn run_verify(
    spec_path: &Path,
    opts: &VerifyOptions,
    out_dir: &Path,
    options: OutputOptions,
) -> Result<VerifyOutput, PipelineError> {
    let loaded = stage("load", load_spec(spec_path))?;
    let mut out = verify(&loaded.spec, opts)?;
    if loaded.polygonization_defaulted {
        out.report.warnings.push(format!(
            "polygonization_n missing; defaulted to {}",
            loaded.spec.polygonization_n
        ));
    }
    write_outputs(&out, out_dir, options)?;
    Ok(out)
}
