use hotspots::domain::{load_spec, save_spec, DomainError, DomainSpec, DEFAULT_POLYGONIZATION};
use hotspots::geometry::Point;
use proptest::prelude::*;

fn round_trip(spec: &DomainSpec) -> DomainSpec {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    save_spec(spec, &path).unwrap();
    let loaded = load_spec(&path).unwrap();
    assert!(!loaded.polygonization_defaulted);
    loaded.spec
}

#[test]
fn every_kind_round_trips_through_a_file() {
    let specs = [
        DomainSpec::disk(1.5, 300),
        DomainSpec::ellipse(2.0, 1.0, 256),
        DomainSpec::rectangle(2.0, 1.0),
        DomainSpec::regular_polygon(7, 0.5),
        DomainSpec::random_convex(u64::MAX - 3, 17),
        DomainSpec::explicit(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.1), Point::new(0.2, 0.9)]),
    ];
    for s in &specs {
        let back = round_trip(s);
        assert_eq!(&back, s);
        assert_eq!(back.realize().unwrap(), s.realize().unwrap());
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_spec(dir.path().join("nope.json")).unwrap_err();
    assert!(matches!(err, DomainError::Io { .. }));
}

#[test]
fn default_polygonization_is_flagged() {
    let loaded = DomainSpec::from_json_str(r#"{"schema": 1, "kind": "disk", "radius": 1.0}"#).unwrap();
    assert!(loaded.polygonization_defaulted);
    assert_eq!(loaded.spec.polygonization_n, DEFAULT_POLYGONIZATION);
    assert_eq!(loaded.spec.realize().unwrap().len(), DEFAULT_POLYGONIZATION);
}

#[test]
fn realized_shapes_have_expected_measures() {
    let r = DomainSpec::rectangle(2.0, 1.0).realize().unwrap();
    assert_eq!(r.area(), 2.0);
    assert_eq!(r.diameter().d, 5f64.sqrt());
    let e = DomainSpec::ellipse(2.0, 1.0, 512).realize().unwrap();
    assert!((e.diameter().d - 4.0).abs() < 1e-12);
    assert!((e.area() - 2.0 * std::f64::consts::PI).abs() < 1e-3);
}

#[test]
fn random_convex_is_reproducible_and_varies_with_seed() {
    let a = DomainSpec::random_convex(5, 20).realize().unwrap();
    let b = DomainSpec::random_convex(5, 20).realize().unwrap();
    let c = DomainSpec::random_convex(6, 20).realize().unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

proptest! {
    #[test]
    fn random_specs_round_trip_in_memory(seed in any::<u64>(), n in 5usize..64) {
        let s = DomainSpec::random_convex(seed, n);
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back = DomainSpec::from_json_str(&text).unwrap().spec;
        prop_assert_eq!(&back, &s);
        let p = s.realize().unwrap();
        prop_assert!(p.len() >= 3 && p.len() <= n);
        prop_assert!(p.vertices().iter().all(|v| v.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn ellipse_specs_round_trip(a in 0.1..10.0f64, ratio in 0.05..1.0f64, n in 32usize..600) {
        let s = DomainSpec::ellipse(a, a * ratio, n);
        let text = serde_json::to_string(&s.to_json()).unwrap();
        prop_assert_eq!(DomainSpec::from_json_str(&text).unwrap().spec, s);
    }
}
