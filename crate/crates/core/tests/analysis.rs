use std::f64::consts::PI;
use std::sync::OnceLock;

use hotspots::analysis::*;
use hotspots::bessel::{bessel_j0, bessel_j1, bessel_j2, j0_derivative, spectral_constants};
use hotspots::domain::DomainSpec;
use hotspots::fem::{neumann_spectrum, solve_dirichlet, SparseSym, Spectrum};
use hotspots::geometry::{ConvexPolygon, Point};
use hotspots::mesh::{generate, TriMesh};
use hotspots::rng::SplitMix64;
use proptest::prelude::*;

const TOL: f64 = 1e-8;

struct Solved {
    mesh: TriMesh,
    k: SparseSym,
    m: SparseSym,
    neumann: Spectrum,
    lambda1: f64,
}

fn solve(spec: DomainSpec, h: f64) -> Solved {
    let mesh = generate(&spec.realize().unwrap(), h).unwrap();
    let (k, m, neumann) = neumann_spectrum(&mesh, 3, TOL).unwrap();
    let lambda1 = solve_dirichlet(&mesh, 1, TOL).unwrap().eigenvalues[0];
    Solved {
        mesh,
        k,
        m,
        neumann,
        lambda1,
    }
}

fn rectangle() -> &'static Solved {
    static S: OnceLock<Solved> = OnceLock::new();
    S.get_or_init(|| solve(DomainSpec::rectangle(2.0, 1.0), 0.02))
}

fn disk() -> &'static Solved {
    static S: OnceLock<Solved> = OnceLock::new();
    S.get_or_init(|| solve(DomainSpec::disk(1.0, 512), 0.02))
}

fn disk_mesh(h: f64) -> TriMesh {
    generate(&DomainSpec::disk(1.0, 512).realize().unwrap(), h).unwrap()
}

fn unit_square() -> ConvexPolygon {
    DomainSpec::rectangle(1.0, 1.0).realize().unwrap()
}

fn field_at(mesh: &TriMesh, f: impl Fn(Point) -> f64) -> Vec<f64> {
    mesh.vertices.iter().map(|&v| f(v)).collect()
}

/// A comparison field built directly from given vertex values.
fn synthetic(mesh: &TriMesh, anchor_vertex: usize, mu2: f64, psi_at_anchor: f64, values: Vec<f64>) -> ComparisonField {
    ComparisonField {
        anchor: mesh.vertices[anchor_vertex],
        anchor_vertex,
        mu2,
        psi_at_anchor,
        negated: false,
        values,
    }
}

fn planted(poly: &ConvexPolygon, p: Point) -> CriticalPoint {
    CriticalPoint {
        vertex_id: 0,
        location: p,
        value: 1.0,
        kind: CriticalKind::Max,
        alternations: 0,
        farthest_distance: poly.farthest_boundary_distance(p),
    }
}

#[test]
fn rectangle_second_mode_has_no_interior_critical_points() {
    let s = rectangle();
    assert!(find_critical_points(&s.mesh, &s.neumann.eigenvectors[1]).is_empty());
    let ext = global_extrema(&s.mesh, &s.neumann.eigenvectors[1]);
    assert!(ext.iter().all(|e| e.on_boundary));
    // the extrema sit on the short edges x = 0 and x = 2
    assert!(ext.iter().all(|e| e.location.x.min(2.0 - e.location.x) < 1e-12));
}

#[test]
fn paraboloid_has_one_minimum_at_the_centre() {
    let mesh = disk_mesh(0.05);
    let psi = field_at(&mesh, |p| p.norm2());
    let cps = find_critical_points(&mesh, &psi);
    assert_eq!(cps.len(), 1);
    assert_eq!(cps[0].kind, CriticalKind::Min);
    assert_eq!(cps[0].alternations, 0);
    assert_eq!(cps[0].vertex_id, mesh.nearest_vertex(Point::new(0.0, 0.0)));
}

#[test]
fn quadratic_saddle_has_four_alternations() {
    let mesh = disk_mesh(0.05);
    let c = mesh.vertices[mesh.nearest_vertex(Point::new(0.0, 0.0))];
    let psi = field_at(&mesh, |p| (p.x - c.x).powi(2) - (p.y - c.y).powi(2));
    let cps = find_critical_points(&mesh, &psi);
    assert_eq!(cps.len(), 1);
    assert_eq!(cps[0].kind, CriticalKind::Saddle);
    assert_eq!(cps[0].alternations, 4);
    assert_eq!(cps[0].location, c);
}

#[test]
fn critical_point_invariants_on_random_fields() {
    let mesh = generate(&DomainSpec::random_convex(3, 9).realize().unwrap(), 0.08).unwrap();
    let mut g = SplitMix64::new(5);
    for _ in 0..20 {
        let psi: Vec<f64> = (0..mesh.vertex_count()).map(|_| g.normal()).collect();
        for cp in find_critical_points(&mesh, &psi) {
            assert!(mesh.interior_mask[cp.vertex_id]);
            assert_eq!(cp.alternations % 2, 0);
            match cp.kind {
                CriticalKind::Saddle => assert!(cp.alternations >= 4),
                _ => assert_eq!(cp.alternations, 0),
            }
        }
    }
}

#[test]
fn empty_point_list_passes() {
    let v = theorem_check(&[], &unit_square(), spectral_constants(), 0.02);
    assert!(v.pass && v.violations.is_empty());
}

#[test]
fn planted_square_centre_is_flagged() {
    let sq = unit_square();
    let c = spectral_constants();
    let p = planted(&sq, Point::new(0.5, 0.5));
    assert!((p.farthest_distance - 0.5f64.sqrt()).abs() < 1e-15);
    let v = theorem_check(&[p], &sq, c, 0.02);
    assert!((v.threshold - c.c_excl * 2f64.sqrt()).abs() < 1e-15);
    assert!((v.threshold - 1.126628).abs() < 1e-4);
    assert_eq!(v.tolerance, 0.04);
    assert!(!v.pass);
    assert_eq!(v.violations.len(), 1);
}

#[test]
fn planted_disk_point_far_from_centre_passes() {
    let d = DomainSpec::disk(1.0, 512).realize().unwrap();
    let p = planted(&d, Point::new(0.7, 0.0));
    assert!((p.farthest_distance - 1.7).abs() < 1e-4);
    let v = theorem_check(&[p], &d, spectral_constants(), 0.02);
    assert!((v.threshold - 1.593340).abs() < 1e-6);
    assert!(v.pass);
}

#[test]
fn comparison_field_vanishes_at_anchor() {
    let s = disk();
    let psi = &s.neumann.eigenvectors[1];
    let mu2 = s.neumann.eigenvalues[1];
    for target in [Point::new(0.3, 0.1), Point::new(-0.2, -0.4), Point::new(0.0, 0.6)] {
        let a = s.mesh.nearest_vertex(target);
        let f = build_comparison(&s.mesh, psi, mu2, s.mesh.vertices[a]).unwrap();
        assert_eq!(f.anchor_vertex, a);
        assert!(f.psi_at_anchor >= 0.0);
        assert_eq!(f.negated, psi[a] < 0.0);
        let wmax = f.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(f.values[a].abs() <= 1e-10 * wmax);
        // spot check the formula
        let sgn = if f.negated { -1.0 } else { 1.0 };
        for i in (0..psi.len()).step_by(97).filter(|&i| i != a) {
            let r = s.mesh.vertices[i].dist(f.anchor);
            let w = f.psi_at_anchor * bessel_j0(mu2.sqrt() * r) - sgn * psi[i];
            assert!((f.values[i] - w).abs() <= 1e-15 * wmax.max(1.0));
        }
    }
}

#[test]
fn zero_anchor_value_gives_negated_field() {
    let mesh = disk_mesh(0.05);
    let a = mesh.nearest_vertex(Point::new(0.2, 0.3));
    let x0 = mesh.vertices[a];
    let psi = field_at(&mesh, |p| p.x - x0.x + 2.0 * (p.y - x0.y));
    assert_eq!(psi[a], 0.0);
    let f = build_comparison(&mesh, &psi, 3.4, x0).unwrap();
    assert_eq!(f.psi_at_anchor, 0.0);
    for (w, p) in f.values.iter().zip(&psi) {
        assert_eq!(*w, -p);
    }
    let flux = boundary_flux(&f, &mesh).unwrap();
    assert!(flux.iter().all(|b| b.value == 0.0));
}

#[test]
fn anchor_must_be_a_vertex() {
    let mesh = disk_mesh(0.1);
    let psi = vec![1.0; mesh.vertex_count()];
    let v = mesh.vertices[mesh.nearest_vertex(Point::new(0.0, 0.0))];
    let off = v + Point::new(1e-3, 0.0);
    assert_eq!(build_comparison(&mesh, &psi, 1.0, off), Err(AnalysisError::AnchorNotVertex(off)));
    assert!(matches!(
        build_comparison(&mesh, &psi[1..], 1.0, v),
        Err(AnalysisError::LengthMismatch { .. })
    ));
}

/// Row residual `|K w - mu M w|` over interior rows relative to `|M w|`, and
/// the same residual tested against a smooth function vanishing on the
/// boundary.
fn helmholtz_residual(h: f64) -> (f64, f64) {
    let mesh = generate(&DomainSpec::disk(1.0, 64).realize().unwrap(), h).unwrap();
    let (k, m, s) = neumann_spectrum(&mesh, 2, 1e-10).unwrap();
    let mu2 = s.eigenvalues[1];
    let a = mesh.nearest_vertex(Point::new(0.4, 0.2));
    let f = build_comparison(&mesh, &s.eigenvectors[1], mu2, mesh.vertices[a]).unwrap();
    let kw = k.mul(&f.values);
    let mw = m.mul(&f.values);
    let (mut num, mut den, mut weak) = (0.0, 0.0, 0.0);
    for i in (0..mesh.vertex_count()).filter(|&i| mesh.interior_mask[i]) {
        let r = kw[i] - mu2 * mw[i];
        let p = mesh.vertices[i];
        num += r * r;
        den += mw[i].powi(2);
        weak += (1.0 - p.norm2()) * (1.0 + p.x) * r;
    }
    ((num / den).sqrt(), weak.abs())
}

#[test]
fn comparison_field_residual_shrinks_with_h() {
    let (coarse, weak_coarse) = helmholtz_residual(0.1);
    let (fine, weak_fine) = helmholtz_residual(0.05);
    assert!(fine < coarse, "{coarse} -> {fine}");
    assert!(coarse <= 0.1 && fine <= 0.05, "{coarse} {fine}");
    // second order in the weak sense
    assert!(weak_coarse / weak_fine >= 3.0, "{weak_coarse} -> {weak_fine}");
}

/// Analytic Helmholtz fields with a zero of given order at the anchor.
fn bessel_mode(order: u32, h: f64) -> (TriMesh, ComparisonField) {
    let mesh = disk_mesh(h);
    let a = mesh.nearest_vertex(Point::new(0.0, 0.0));
    let c = mesh.vertices[a];
    let mu: f64 = 9.0;
    let k = mu.sqrt();
    let values = field_at(&mesh, |p| {
        let d = p - c;
        let (r, t) = (d.norm(), d.y.atan2(d.x));
        match order {
            1 => bessel_j1(k * r) * t.cos(),
            _ => bessel_j2(k * r) * (2.0 * t).cos(),
        }
    });
    let f = synthetic(&mesh, a, mu, 0.0, values);
    (mesh, f)
}

#[test]
fn branch_counts_of_bessel_modes() {
    let (mesh, f2) = bessel_mode(2, 0.02);
    let (_, f1) = bessel_mode(1, 0.02);
    for r in [0.1, 0.3, 0.6] {
        assert_eq!(branch_count(&mesh, &f2, r).unwrap(), 4, "r = {r}");
        assert_eq!(branch_count(&mesh, &f1, r).unwrap(), 2, "r = {r}");
    }
    let pos = synthetic(&mesh, f1.anchor_vertex, 9.0, 1.0, field_at(&mesh, |p| 2.0 + p.x));
    assert_eq!(branch_count(&mesh, &pos, 0.3).unwrap(), 0);
}

#[test]
fn branch_circle_must_fit() {
    let (mesh, f) = bessel_mode(2, 0.05);
    let clearance = mesh.polygon.clearance(f.anchor);
    assert!(matches!(
        branch_count(&mesh, &f, clearance + 0.01),
        Err(AnalysisError::CircleOutsideDomain { .. })
    ));
    assert!(matches!(branch_count(&mesh, &f, 0.1), Err(AnalysisError::RadiusTooSmall { .. })));
}

#[test]
fn flux_of_unit_bessel_field_on_the_disk() {
    let mesh = disk_mesh(0.02);
    let a = mesh.nearest_vertex(Point::new(0.0, 0.0));
    let mut mesh = mesh;
    // pin the anchor to the exact centre
    mesh.vertices[a] = Point::new(0.0, 0.0);
    let f = synthetic(&mesh, a, 4.0, 1.0, vec![0.0; mesh.vertex_count()]);
    let flux = boundary_flux(&f, &mesh).unwrap();
    assert_eq!(flux.len(), mesh.boundary_edges.len());
    let expect = 2.0 * j0_derivative(2.0).unwrap();
    assert!((expect - -1.1534496).abs() < 1e-7);
    let chord_sag = 1.0 - (PI / 512.0).cos();
    for b in &flux {
        // edge midpoints of the inscribed polygon sit just inside the circle
        assert!((b.value - expect).abs() <= 10.0 * chord_sag, "{}", b.value);
        let r = b.point.norm();
        let exact = 2.0 * -bessel_j1(2.0 * r) * b.point.dot(b.normal) / r;
        assert!((b.value - exact).abs() < 1e-14);
    }
}

#[test]
fn flux_requires_interior_anchor() {
    let mesh = disk_mesh(0.1);
    let b = mesh.boundary_edges[0].a;
    let f = synthetic(&mesh, b, 4.0, 1.0, vec![0.0; mesh.vertex_count()]);
    assert_eq!(boundary_flux(&f, &mesh), Err(AnalysisError::AnchorOnBoundary));
}

#[test]
fn flux_is_nonpositive_below_the_first_zero() {
    let j1 = spectral_constants().j1;
    let mut g = SplitMix64::new(17);
    for seed in 0..12u64 {
        let poly = DomainSpec::random_convex(seed, 5 + seed as usize).realize().unwrap();
        let mesh = generate(&poly, poly.diameter().d / 30.0).unwrap();
        let psi = vec![1.0; mesh.vertex_count()];
        for _ in 0..5 {
            let interior: Vec<usize> = (0..mesh.vertex_count()).filter(|&i| mesh.interior_mask[i]).collect();
            let a = interior[g.below(interior.len())];
            let x0 = mesh.vertices[a];
            let f_far = poly.farthest_boundary_distance(x0);
            let mu = (g.uniform(0.05, 1.0) * j1 / f_far).powi(2);
            assert!(support_positivity(&poly, x0) > 0.0);
            let f = build_comparison(&mesh, &psi, mu, x0).unwrap();
            for b in boundary_flux(&f, &mesh).unwrap() {
                assert!(b.value <= 1e-10 * poly.scale(), "seed {seed}: {}", b.value);
            }
        }
    }
}

#[test]
fn support_positivity_examples() {
    let sq = unit_square();
    assert!((support_positivity(&sq, Point::new(0.5, 0.5)) - 0.5).abs() < 1e-15);
    assert!((support_positivity(&sq, Point::new(0.99, 0.5)) - 0.01).abs() < 1e-12);
    assert!(support_positivity(&sq, Point::new(1.2, 0.5)) < 0.0);
}

#[test]
fn nodal_line_of_a_linear_field() {
    let mesh = generate(&unit_square(), 0.05).unwrap();
    let nd = nodal_decomposition(&mesh, &field_at(&mesh, |p| p.x - 0.5));
    assert_eq!(nd.components.len(), 2);
    assert_eq!(nd.positive_component_count, 1);
    assert!(nd.all_touch_boundary());
    assert!(!nd.segments.is_empty());
    for (a, b) in &nd.segments {
        assert!((a.x - 0.5).abs() < 1e-12 && (b.x - 0.5).abs() < 1e-12);
    }
    // w = x vanishes on the edge x = 0 and is positive elsewhere
    let nd = nodal_decomposition(&mesh, &field_at(&mesh, |p| p.x));
    assert_eq!(nd.components.len(), 1);
    assert!(nd.all_touch_boundary());
}

#[test]
fn interior_nodal_domain_is_flagged() {
    let mesh = disk_mesh(0.02);
    let nd = nodal_decomposition(&mesh, &field_at(&mesh, |p| p.norm2() - 0.25));
    assert_eq!(nd.components.len(), 2);
    let inner = nd.interior_components();
    assert_eq!(inner.len(), 1);
    assert_eq!(nd.components[inner[0]].sign, -1);
    assert!(!nd.all_touch_boundary());
    for (a, b) in &nd.segments {
        assert!((a.norm() - 0.5).abs() < 0.01 && (b.norm() - 0.5).abs() < 0.01);
    }
}

#[test]
fn positive_field_is_one_component() {
    let mesh = disk_mesh(0.1);
    let nd = nodal_decomposition(&mesh, &vec![1.0; mesh.vertex_count()]);
    assert_eq!(nd.components.len(), 1);
    assert_eq!(nd.positive_component_count, 1);
    assert!(nd.segments.is_empty());
    assert!(nd.all_touch_boundary());
}

#[test]
fn labels_are_connected_sign_classes() {
    let mesh = generate(&DomainSpec::random_convex(8, 14).realize().unwrap(), 0.06).unwrap();
    let mut g = SplitMix64::new(8);
    let (cx, cy) = (g.uniform(-0.3, 0.3), g.uniform(-0.3, 0.3));
    let w = field_at(&mesh, |p| ((p.x - cx) * 7.0).sin() * ((p.y - cy) * 5.0).cos());
    let nd = nodal_decomposition(&mesh, &w);
    let tie = 1e-12 * w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (v, l) in nd.domain_label.iter().enumerate() {
        assert_eq!(l.is_some(), w[v].abs() > tie);
        if let Some(c) = l {
            assert_eq!(nd.components[*c].sign as f64, w[v].signum());
        }
    }
    for (a, b) in mesh.edges() {
        if let (Some(la), Some(lb)) = (nd.domain_label[a], nd.domain_label[b]) {
            if w[a].signum() == w[b].signum() {
                assert_eq!(la, lb);
            }
        }
    }
    let counts: usize = nd.components.iter().map(|c| c.vertex_count).sum();
    assert_eq!(counts, nd.domain_label.iter().flatten().count());
}

#[test]
fn computed_second_modes_have_no_interior_nodal_domains() {
    for s in [rectangle(), disk()] {
        for v in &s.neumann.eigenvectors[1..] {
            assert!(nodal_decomposition(&s.mesh, v).all_touch_boundary());
        }
    }
}

#[test]
fn half_wave_energy_balance() {
    let s = rectangle();
    let psi = &s.neumann.eigenvectors[1];
    let mu2 = s.neumann.eigenvalues[1];
    let a = s.mesh.nearest_vertex(Point::new(1.0, 0.5));
    let w: Vec<f64> = psi.iter().map(|x| -x).collect();
    let f = synthetic(&s.mesh, a, mu2, 0.0, w);
    let nd = nodal_decomposition(&s.mesh, &f.values);
    assert_eq!(nd.components.len(), 2);
    let flux = boundary_flux(&f, &s.mesh).unwrap();
    let c = nd.components.iter().position(|c| c.sign > 0).unwrap();
    let d = rayleigh_defect(&s.mesh, &s.k, &s.m, &f, &nd, c, &flux).unwrap();
    assert!((d.ratio - 1.0).abs() <= 0.02, "ratio {}", d.ratio);
    assert_eq!(d.boundary_term, 0.0);
    assert!(d.combination_quotient.is_none());
    let neg = nd.components.iter().position(|c| c.sign < 0).unwrap();
    assert_eq!(
        rayleigh_defect(&s.mesh, &s.k, &s.m, &f, &nd, neg, &flux),
        Err(AnalysisError::NotPositiveComponent(neg))
    );
    assert_eq!(
        rayleigh_defect(&s.mesh, &s.k, &s.m, &f, &nd, 99, &flux),
        Err(AnalysisError::NotPositiveComponent(99))
    );
}

#[test]
fn distance_function_is_measured_not_assumed() {
    let sq = unit_square();
    let mesh = generate(&sq, 0.02).unwrap();
    let (k, m, _) = (
        hotspots::fem::assemble_stiffness(&mesh),
        hotspots::fem::assemble_mass(&mesh, false),
        (),
    );
    let w = field_at(&mesh, |p| sq.clearance(p).max(0.0));
    let a = mesh.nearest_vertex(Point::new(0.5, 0.5));
    let f = synthetic(&mesh, a, PI * PI, 0.0, w);
    let nd = nodal_decomposition(&mesh, &f.values);
    let flux = boundary_flux(&f, &mesh).unwrap();
    let d = rayleigh_defect(&mesh, &k, &m, &f, &nd, 0, &flux).unwrap();
    // int |grad d|^2 = 1 and int d^2 = 1/24 on the unit square
    assert!((d.ratio - 24.0 / (PI * PI)).abs() < 0.05, "ratio {}", d.ratio);
}

#[test]
fn zero_mean_combination_of_two_bumps() {
    let s = rectangle();
    // two disjoint positive bumps: the combination is orthogonal to constants
    let phi1 = field_at(&s.mesh, |p| (0.5 - p.x).max(0.0));
    let phi2 = field_at(&s.mesh, |p| (p.x - 1.5).max(0.0));
    let q = zero_mean_quotient(&s.k, &s.m, &phi1, &phi2).unwrap();
    assert!(q >= s.neumann.eigenvalues[1]);
    assert!(zero_mean_quotient(&s.k, &s.m, &phi1, &phi1).is_none());
}

#[test]
fn inequality_values_for_analytic_spectra() {
    let c = spectral_constants();
    let disk = DomainSpec::disk(1.0, 512).realize().unwrap();
    let r = inequality_checks(c.jp11 * c.jp11, c.j0 * c.j0, &disk, c);
    assert!((r.scaled_mu2 - 13.560).abs() < 1e-3);
    assert!((r.kroger_margin - 9.572).abs() < 1e-3);
    assert!(r.strong_kroger_holds && r.hot_spots_certified);

    let rect = DomainSpec::rectangle(2.0, 1.0).realize().unwrap();
    let mu = PI * PI / 4.0;
    let r = inequality_checks(mu, PI * PI * 1.25, &rect, c);
    assert!((r.scaled_mu2 - 12.337).abs() < 1e-3);
    assert!((r.payne_weinberger_margin - 2.467).abs() < 1e-3);
    assert!(r.strong_kroger_holds && r.hot_spots_certified);
    assert!((r.polya_margin - PI * PI).abs() < 1e-12);

    let sq = unit_square();
    let r = inequality_checks(PI * PI, 2.0 * PI * PI, &sq, c);
    assert!((r.scaled_mu2 - 19.739).abs() < 1e-3);
    assert!((r.kroger_margin - 3.393).abs() < 1e-3);
    assert!(!r.strong_kroger_holds && !r.hot_spots_certified);
    assert!((r.szego_weinberger_margin - (PI * c.jp11 * c.jp11 - PI * PI)).abs() < 1e-12);
}

#[test]
fn inequalities_on_computed_spectra() {
    let c = spectral_constants();
    for s in [rectangle(), disk()] {
        let r = inequality_checks(s.neumann.eigenvalues[1], s.lambda1, &s.mesh.polygon, c);
        assert!(r.kroger_margin >= 0.0);
        assert!(r.payne_weinberger_margin >= 0.0);
        assert!(r.polya_margin > 0.0);
        assert!(r.szego_weinberger_margin >= -0.01 * s.neumann.eigenvalues[1]);
        assert!(r.strong_kroger_holds);
        // certified domains carry no interior critical points
        let degenerate = s.neumann.eigenvalues[2] - s.neumann.eigenvalues[1] <= 1e-6 * s.neumann.eigenvalues[1];
        let upto = if degenerate { 3 } else { 2 };
        for v in &s.neumann.eigenvectors[1..upto] {
            assert!(find_critical_points(&s.mesh, v).is_empty());
        }
    }
}

#[test]
fn maximiser_distance_to_diameter_endpoints() {
    let s = rectangle();
    let (r, _) = s.mesh.polygon.inradius();
    let v = steinerberger_diagnostic(&s.mesh, &s.neumann.eigenvectors[1], &s.mesh.polygon);
    // the maximiser lies on a short edge, which holds a diameter endpoint
    assert!(v >= 0.0 && v <= 0.5 / r + s.mesh.h_max / r, "{v}");
    let d = disk();
    for psi in &d.neumann.eigenvectors[1..] {
        let v = steinerberger_diagnostic(&d.mesh, psi, &d.mesh.polygon);
        assert!(v.is_finite() && v >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branch_count_is_even(seed in any::<u64>(), frac in 0.0..1.0f64) {
        static MESH: OnceLock<TriMesh> = OnceLock::new();
        let mesh = MESH.get_or_init(|| disk_mesh(0.05));
        let mut g = SplitMix64::new(seed);
        let a = mesh.nearest_vertex(Point::new(g.uniform(-0.3, 0.3), g.uniform(-0.3, 0.3)));
        let values: Vec<f64> = (0..mesh.vertex_count()).map(|_| g.normal()).collect();
        let f = synthetic(mesh, a, 1.0, 0.0, values);
        let lo = 3.0 * mesh.h_max;
        let hi = mesh.polygon.clearance(f.anchor);
        prop_assume!(hi > lo);
        let r = lo + frac * (hi - lo) * 0.99;
        prop_assert_eq!(branch_count(mesh, &f, r).unwrap() % 2, 0);
    }

    #[test]
    fn support_positivity_sign_matches_containment(x in -0.5..1.5f64, y in -0.5..1.5f64) {
        let sq = unit_square();
        let p = Point::new(x, y);
        let s = support_positivity(&sq, p);
        prop_assert_eq!(s > 0.0, sq.clearance(p) > 0.0);
    }
}
