//! `hsv`: verify, map, render and sweep convex domains.
//!
//! Exit codes: 0 pass, 1 bad input, 2 solver failure, 3 theorem violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hotspots::bessel::spectral_constants;
use hotspots::domain::{load_spec, DomainSpec};
use hotspots::geometry::{exclusion_region, Point};
use hotspots::pipeline::{run_verify, verify, OutputOptions, VerifyOptions};
use hotspots::report::VerificationReport;
use hotspots::svg::{render_svg, Scene, SvgOptions};
use hotspots::sweep::{run_sweep, threads_from_env, SweepOptions};

const EXIT_INPUT: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "hsv", version, about = "Critical-point exclusion checks for second Neumann eigenfunctions of convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a domain spec and write report.json and figure.svg.
    Verify(VerifyArgs),
    /// Compute the exclusion region of a domain and write region.json.
    Region(RegionArgs),
    /// Redraw the figure for an existing report.json.
    Render(RenderArgs),
    /// Verify a batch of seeded random convex polygons.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Draw {
    /// Draw the zero set of the second eigenfunction.
    #[arg(long)]
    show_nodal: bool,
    /// Draw mesh edges.
    #[arg(long)]
    show_mesh: bool,
}

impl Draw {
    fn options(&self) -> SvgOptions {
        SvgOptions {
            show_nodal: self.show_nodal,
            show_mesh: self.show_mesh,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Domain spec (JSON, schema 1).
    spec: PathBuf,
    /// Target mesh size.
    #[arg(long, default_value_t = 0.02)]
    h: f64,
    /// Uniform refinements after meshing.
    #[arg(long, default_value_t = 0)]
    refine: u32,
    /// Neumann eigenpairs to compute (>= 3).
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Relative eigen-residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Output directory.
    #[arg(long, default_value = "hsv-out")]
    out: PathBuf,
    /// Seed for eigenspace sampling when mu_2 is degenerate.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the figure to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    draw: Draw,
    /// Write the mesh as mesh.txt (HSV-MESH 1).
    #[arg(long)]
    dump_mesh: bool,
    /// Add a synthetic critical point at X,Y to the theorem check (testing aid).
    #[arg(long, value_parser = parse_point, value_name = "X,Y")]
    plant: Vec<Point>,
}

#[derive(Args)]
struct RegionArgs {
    spec: PathBuf,
    #[arg(long, default_value = "hsv-out")]
    out: PathBuf,
    /// Also draw domain and region to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// A report.json written by `verify`.
    report: PathBuf,
    /// Output path (default: figure.svg beside the report).
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    draw: Draw,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Mesh size relative to each domain's diameter.
    #[arg(long, default_value_t = 0.02)]
    h: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value = "hsv-sweep")]
    out: PathBuf,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected X,Y")?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Point::new(p(x)?, p(y)?))
}

struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let opts = VerifyOptions {
        h: a.h,
        refinements: a.refine,
        k: a.k,
        tol: a.tol,
        seed: a.seed,
        planted: a.plant.clone(),
    };
    let out_opts = OutputOptions {
        svg: a.draw.options(),
        mesh_dump: a.dump_mesh,
    };
    let out = run_verify(&a.spec, &opts, &a.out, out_opts).map_err(|e| Failure {
        code: e.exit_code() as u8,
        message: e.to_string(),
    })?;
    if let Some(path) = &a.svg {
        write_file(path, &render_svg(&out.scene(a.draw.options())))?;
    }
    let r = &out.report;
    println!(
        "mu2 = {:.6}  lambda1 = {:.6}  mu2*diam^2 = {:.4}  strong_kroger = {}",
        r.spectrum.neumann[1], r.spectrum.lambda1, r.inequalities.scaled_mu2, r.inequalities.strong_kroger_holds
    );
    println!(
        "critical points: {}  violations: {}  threshold = {:.6}  verdict: {}",
        r.verdict.critical_points.len(),
        r.verdict.violations.len(),
        r.verdict.threshold,
        if r.verdict.pass { "pass" } else { "VIOLATION" }
    );
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    println!("wrote {}", a.out.display());
    Ok(out.exit_code() as u8)
}

fn cmd_region(a: &RegionArgs) -> Result<u8, Failure> {
    let loaded = load_spec(&a.spec).map_err(input)?;
    let poly = loaded.spec.realize().map_err(input)?;
    let region = exclusion_region(&poly, spectral_constants().c_excl).map_err(input)?;
    std::fs::create_dir_all(&a.out).map_err(|e| input(format!("cannot create {}: {e}", a.out.display())))?;
    let text = serde_json::to_string_pretty(&region).expect("region serializes") + "\n";
    write_file(&a.out.join("region.json"), &text)?;
    if let Some(path) = &a.svg {
        let scene = Scene {
            polygon: &poly,
            region: &region,
            critical_points: Vec::new(),
            boundary_extrema: Vec::new(),
            nodal: None,
            mesh: None,
        };
        write_file(path, &render_svg(&scene))?;
    }
    let clipped = region.clipped.iter().filter(|&&c| c).count();
    println!(
        "threshold = {:.6}  samples = {}  clipped = {}  seed = ({:.6}, {:.6})",
        region.threshold,
        region.boundary.len(),
        clipped,
        region.seed.x,
        region.seed.y
    );
    Ok(0)
}

fn cmd_render(a: &RenderArgs) -> Result<u8, Failure> {
    let report = VerificationReport::read(&a.report).map_err(|e| input(format!("{}: {e}", a.report.display())))?;
    let spec: DomainSpec = DomainSpec::from_json(&report.domain).map_err(input)?.spec;
    let path = a
        .svg
        .clone()
        .unwrap_or_else(|| a.report.with_file_name(hotspots::pipeline::FIGURE_FILE));
    let opts = a.draw.options();
    let svg = if opts.show_nodal || opts.show_mesh {
        // Mesh and eigenfunction are not stored in the report; recompute them
        // deterministically from the recorded parameters.
        let p = &report.parameters;
        let vopts = VerifyOptions {
            h: p.h,
            refinements: p.refinements,
            k: p.k,
            tol: p.tol,
            seed: p.seed,
            planted: p.planted.clone(),
        };
        let out = verify(&spec, &vopts).map_err(|e| Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        })?;
        render_svg(&out.scene(opts))
    } else {
        let poly = spec.realize().map_err(input)?;
        let region = exclusion_region(&poly, report.geometry.c_excl).map_err(input)?;
        render_svg(&Scene {
            polygon: &poly,
            region: &region,
            critical_points: report.interior_critical_points.iter().map(|c| c.point.location).collect(),
            boundary_extrema: report.boundary_extrema.iter().map(|e| e.location).collect(),
            nodal: None,
            mesh: None,
        })
    };
    write_file(&path, &svg)?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_sweep(a: &SweepArgs) -> Result<u8, Failure> {
    let opts = SweepOptions {
        count: a.count,
        seed: a.seed,
        h_rel: a.h,
        k: a.k,
        tol: a.tol,
        threads: threads_from_env(),
    };
    let s = run_sweep(&opts, &a.out).map_err(input)?;
    println!(
        "domains: {}  pass: {}  violations: {}  errors: {}  strong_kroger: {}",
        s.count, s.pass_count, s.violation_count, s.error_count, s.strong_kroger_count
    );
    if s.violation_count > 0 {
        eprintln!("THEOREM VIOLATION in {} domain(s); see {}", s.violation_count, a.out.display());
        return Ok(EXIT_VIOLATION);
    }
    if s.error_count > 0 {
        return Ok(EXIT_SOLVER);
    }
    Ok(0)
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own code 2 would read as a solver failure.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Region(a) => cmd_region(a),
        Command::Render(a) => cmd_render(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
