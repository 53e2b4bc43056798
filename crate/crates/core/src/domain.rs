//! Test domains and their JSON description.
//!
//! A spec file looks like
//!
//! ```json
//! {"schema": 1, "kind": "ellipse", "a": 2.0, "b": 1.0, "polygonization_n": 256}
//! ```
//!
//! | kind              | fields                                         |
//! |-------------------|------------------------------------------------|
//! | `disk`            | `radius`                                       |
//! | `ellipse`         | `a >= b`                                       |
//! | `rectangle`       | `length >= width`                              |
//! | `regular_polygon` | `vertex_count >= 3`, `circumradius`            |
//! | `random_convex`   | `seed`, `vertex_count >= 5`, `radius` (opt., 1)|
//! | `explicit`        | `vertices: [[x, y], ...]`                      |
//!
//! Curved kinds take `polygonization_n >= 32` (default 512, flagged on load).

use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::geometry::{ConvexPolygon, GeometryError, Point};
use crate::rng::SplitMix64;

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_POLYGONIZATION: usize = 512;
pub const MIN_CURVED_POLYGONIZATION: usize = 32;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("parse error{}: {message}", location(.line, .column))]
    Parse {
        field: Option<String>,
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersionMismatch { expected: u64, found: Value },
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn location(line: &Option<usize>, column: &Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l} column {c}"),
        _ => String::new(),
    }
}

fn field_error(field: &str, message: impl Into<String>) -> DomainError {
    DomainError::Parse {
        field: Some(field.to_string()),
        line: None,
        column: None,
        message: format!("field `{field}`: {}", message.into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Disk { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Rectangle { length: f64, width: f64 },
    RegularPolygon { vertex_count: usize, circumradius: f64 },
    RandomConvex { seed: u64, vertex_count: usize, radius: f64 },
    Explicit { vertices: Vec<Point> },
}

impl DomainKind {
    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::Disk { .. } => "disk",
            DomainKind::Ellipse { .. } => "ellipse",
            DomainKind::Rectangle { .. } => "rectangle",
            DomainKind::RegularPolygon { .. } => "regular_polygon",
            DomainKind::RandomConvex { .. } => "random_convex",
            DomainKind::Explicit { .. } => "explicit",
        }
    }

    pub fn is_curved(&self) -> bool {
        matches!(self, DomainKind::Disk { .. } | DomainKind::Ellipse { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub polygonization_n: usize,
}

/// A spec as read from disk, with any defaults that were filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSpec {
    pub spec: DomainSpec,
    pub polygonization_defaulted: bool,
}

impl DomainSpec {
    pub fn disk(radius: f64, n: usize) -> Self {
        Self {
            kind: DomainKind::Disk { radius },
            polygonization_n: n,
        }
    }

    pub fn ellipse(a: f64, b: f64, n: usize) -> Self {
        Self {
            kind: DomainKind::Ellipse { a, b },
            polygonization_n: n,
        }
    }

    pub fn rectangle(length: f64, width: f64) -> Self {
        Self {
            kind: DomainKind::Rectangle { length, width },
            polygonization_n: DEFAULT_POLYGONIZATION,
        }
    }

    pub fn regular_polygon(vertex_count: usize, circumradius: f64) -> Self {
        Self {
            kind: DomainKind::RegularPolygon {
                vertex_count,
                circumradius,
            },
            polygonization_n: DEFAULT_POLYGONIZATION,
        }
    }

    pub fn random_convex(seed: u64, vertex_count: usize) -> Self {
        Self {
            kind: DomainKind::RandomConvex {
                seed,
                vertex_count,
                radius: 1.0,
            },
            polygonization_n: DEFAULT_POLYGONIZATION,
        }
    }

    pub fn explicit(vertices: Vec<Point>) -> Self {
        Self {
            kind: DomainKind::Explicit { vertices },
            polygonization_n: DEFAULT_POLYGONIZATION,
        }
    }

    /// Check parameter ranges without building the polygon.
    pub fn check(&self) -> Result<(), DomainError> {
        fn positive(field: &'static str, v: f64) -> Result<(), DomainError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(DomainError::InvalidParameter {
                    field,
                    message: format!("must be positive and finite, got {v}"),
                })
            }
        }
        match &self.kind {
            DomainKind::Disk { radius } => positive("radius", *radius)?,
            DomainKind::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                if a < b {
                    return Err(DomainError::InvalidParameter {
                        field: "b",
                        message: format!("semi-axes must satisfy a >= b, got a = {a}, b = {b}"),
                    });
                }
            }
            DomainKind::Rectangle { length, width } => {
                positive("length", *length)?;
                positive("width", *width)?;
                if length < width {
                    return Err(DomainError::InvalidParameter {
                        field: "width",
                        message: "sides must satisfy length >= width".into(),
                    });
                }
            }
            DomainKind::RegularPolygon {
                vertex_count,
                circumradius,
            } => {
                positive("circumradius", *circumradius)?;
                if *vertex_count < 3 {
                    return Err(DomainError::InvalidParameter {
                        field: "vertex_count",
                        message: "needs at least 3 vertices".into(),
                    });
                }
            }
            DomainKind::RandomConvex {
                vertex_count,
                radius,
                ..
            } => {
                positive("radius", *radius)?;
                if *vertex_count < 5 {
                    return Err(DomainError::InvalidParameter {
                        field: "vertex_count",
                        message: "random domains need at least 5 vertices".into(),
                    });
                }
            }
            DomainKind::Explicit { .. } => {}
        }
        if self.kind.is_curved() && self.polygonization_n < MIN_CURVED_POLYGONIZATION {
            return Err(DomainError::InvalidParameter {
                field: "polygonization_n",
                message: format!(
                    "curved domains need at least {MIN_CURVED_POLYGONIZATION} samples, got {}",
                    self.polygonization_n
                ),
            });
        }
        Ok(())
    }

    pub fn realize(&self) -> Result<ConvexPolygon, DomainError> {
        self.check()?;
        let tau = std::f64::consts::TAU;
        let on_ellipse = |a: f64, b: f64, n: usize| -> Vec<Point> {
            (0..n)
                .map(|i| {
                    let t = tau * i as f64 / n as f64;
                    Point::new(a * t.cos(), b * t.sin())
                })
                .collect()
        };
        let pts = match &self.kind {
            DomainKind::Disk { radius } => on_ellipse(*radius, *radius, self.polygonization_n),
            DomainKind::Ellipse { a, b } => on_ellipse(*a, *b, self.polygonization_n),
            DomainKind::Rectangle { length, width } => vec![
                Point::new(0.0, 0.0),
                Point::new(*length, 0.0),
                Point::new(*length, *width),
                Point::new(0.0, *width),
            ],
            DomainKind::RegularPolygon {
                vertex_count,
                circumradius,
            } => on_ellipse(*circumradius, *circumradius, *vertex_count),
            DomainKind::RandomConvex {
                seed,
                vertex_count,
                radius,
            } => random_convex_points(*seed, *vertex_count, *radius),
            DomainKind::Explicit { vertices } => vertices.clone(),
        };
        Ok(ConvexPolygon::validate(&pts)?)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(SCHEMA_VERSION));
        obj.insert("kind".into(), json!(self.kind.name()));
        match &self.kind {
            DomainKind::Disk { radius } => {
                obj.insert("radius".into(), json!(radius));
            }
            DomainKind::Ellipse { a, b } => {
                obj.insert("a".into(), json!(a));
                obj.insert("b".into(), json!(b));
            }
            DomainKind::Rectangle { length, width } => {
                obj.insert("length".into(), json!(length));
                obj.insert("width".into(), json!(width));
            }
            DomainKind::RegularPolygon {
                vertex_count,
                circumradius,
            } => {
                obj.insert("vertex_count".into(), json!(vertex_count));
                obj.insert("circumradius".into(), json!(circumradius));
            }
            DomainKind::RandomConvex {
                seed,
                vertex_count,
                radius,
            } => {
                obj.insert("seed".into(), json!(seed));
                obj.insert("vertex_count".into(), json!(vertex_count));
                obj.insert("radius".into(), json!(radius));
            }
            DomainKind::Explicit { vertices } => {
                let v: Vec<[f64; 2]> = vertices.iter().map(|p| [p.x, p.y]).collect();
                obj.insert("vertices".into(), json!(v));
            }
        }
        obj.insert("polygonization_n".into(), json!(self.polygonization_n));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<LoadedSpec, DomainError> {
        let obj = v
            .as_object()
            .ok_or_else(|| field_error("<root>", "expected a JSON object"))?;
        match obj.get("schema") {
            None => return Err(field_error("schema", "missing")),
            Some(s) if s.as_u64() == Some(SCHEMA_VERSION) => {}
            Some(s) => {
                return Err(DomainError::SchemaVersionMismatch {
                    expected: SCHEMA_VERSION,
                    found: s.clone(),
                })
            }
        }
        let num = |field: &str| -> Result<f64, DomainError> {
            obj.get(field)
                .ok_or_else(|| field_error(field, "missing"))?
                .as_f64()
                .ok_or_else(|| field_error(field, "expected a number"))
        };
        let count = |field: &str| -> Result<usize, DomainError> {
            obj.get(field)
                .ok_or_else(|| field_error(field, "missing"))?
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| field_error(field, "expected a non-negative integer"))
        };
        let kind_name = obj
            .get("kind")
            .ok_or_else(|| field_error("kind", "missing"))?
            .as_str()
            .ok_or_else(|| field_error("kind", "expected a string"))?;
        let kind = match kind_name {
            "disk" => DomainKind::Disk {
                radius: num("radius")?,
            },
            "ellipse" => DomainKind::Ellipse {
                a: num("a")?,
                b: num("b")?,
            },
            "rectangle" => DomainKind::Rectangle {
                length: num("length")?,
                width: num("width")?,
            },
            "regular_polygon" => DomainKind::RegularPolygon {
                vertex_count: count("vertex_count")?,
                circumradius: num("circumradius")?,
            },
            "random_convex" => DomainKind::RandomConvex {
                seed: obj
                    .get("seed")
                    .ok_or_else(|| field_error("seed", "missing"))?
                    .as_u64()
                    .ok_or_else(|| field_error("seed", "expected a non-negative integer"))?,
                vertex_count: count("vertex_count")?,
                radius: match obj.get("radius") {
                    None => 1.0,
                    Some(_) => num("radius")?,
                },
            },
            "explicit" => {
                let arr = obj
                    .get("vertices")
                    .ok_or_else(|| field_error("vertices", "missing"))?
                    .as_array()
                    .ok_or_else(|| field_error("vertices", "expected an array of [x, y] pairs"))?;
                let mut vertices = Vec::with_capacity(arr.len());
                for (i, p) in arr.iter().enumerate() {
                    let pair = p.as_array().filter(|a| a.len() == 2).and_then(|a| {
                        Some(Point::new(a[0].as_f64()?, a[1].as_f64()?))
                    });
                    vertices.push(pair.ok_or_else(|| {
                        field_error("vertices", format!("entry {i} is not an [x, y] pair"))
                    })?);
                }
                DomainKind::Explicit { vertices }
            }
            other => {
                return Err(field_error(
                    "kind",
                    format!(
                        "unknown kind `{other}`; expected one of disk, ellipse, rectangle, \
                         regular_polygon, random_convex, explicit"
                    ),
                ))
            }
        };
        let (polygonization_n, defaulted) = match obj.get("polygonization_n") {
            Some(_) => (count("polygonization_n")?, false),
            None => (DEFAULT_POLYGONIZATION, kind.is_curved()),
        };
        let spec = DomainSpec {
            kind,
            polygonization_n,
        };
        spec.check()?;
        Ok(LoadedSpec {
            spec,
            polygonization_defaulted: defaulted,
        })
    }

    pub fn from_json_str(text: &str) -> Result<LoadedSpec, DomainError> {
        let v: Value = serde_json::from_str(text).map_err(|e| DomainError::Parse {
            field: None,
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        Self::from_json(&v)
    }
}

pub fn save_spec(spec: &DomainSpec, path: impl AsRef<Path>) -> Result<(), DomainError> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&spec.to_json()).expect("spec serializes");
    std::fs::write(path, text + "\n").map_err(|source| DomainError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<LoadedSpec, DomainError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DomainError::Io {
        path: path.display().to_string(),
        source,
    })?;
    DomainSpec::from_json_str(&text)
}

/// Points near a circle: one per angular sector with the angle jittered
/// within the middle half of the sector, radius jittered down by up to 15%,
/// then the convex hull. Keeping one point per sector bounds every interior
/// angle well away from zero.
fn random_convex_points(seed: u64, n: usize, radius: f64) -> Vec<Point> {
    let mut rng = SplitMix64::new(seed);
    let sector = std::f64::consts::TAU / n as f64;
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let t = sector * (i as f64 + 0.25 + 0.5 * rng.next_f64());
            let r = radius * (1.0 - 0.15 * rng.next_f64());
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect();
    convex_hull(&pts)
}

/// Andrew's monotone chain; CCW, collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 {
            let l = lower.len();
            if (lower[l - 1] - lower[l - 2]).cross(p - lower[l - 1]) <= 0.0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let l = upper.len();
            if (upper[l - 1] - upper[l - 2]).cross(p - upper[l - 1]) <= 0.0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_with_four_samples_is_a_square() {
        let p = DomainSpec::disk(1.0, 32).realize().unwrap();
        assert_eq!(p.len(), 32);
        let sq = DomainSpec {
            kind: DomainKind::Disk { radius: 1.0 },
            polygonization_n: 4,
        };
        // below the curved minimum
        assert!(sq.realize().is_err());
        let sq = DomainSpec::regular_polygon(4, 1.0).realize().unwrap();
        let v = sq.vertices();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, e) in v.iter().zip(expect) {
            assert!(p.dist(e.into()) < 1e-15);
        }
    }

    #[test]
    fn unknown_kind_names_field() {
        let err = DomainSpec::from_json_str(r#"{"schema":1,"kind":"pentagon"}"#).unwrap_err();
        match err {
            DomainError::Parse { field, .. } => assert_eq!(field.as_deref(), Some("kind")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_location() {
        let err = DomainSpec::from_json_str("{\"schema\": 1,\n \"kind\": }").unwrap_err();
        match err {
            DomainError::Parse { line, column, .. } => {
                assert_eq!(line, Some(2));
                assert!(column.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_mismatch() {
        let err = DomainSpec::from_json_str(r#"{"schema":2,"kind":"disk","radius":1}"#).unwrap_err();
        assert!(matches!(err, DomainError::SchemaVersionMismatch { .. }));
    }

    #[test]
    fn default_polygonization_flagged() {
        let l = DomainSpec::from_json_str(r#"{"schema":1,"kind":"disk","radius":1.0}"#).unwrap();
        assert_eq!(l.spec.polygonization_n, 512);
        assert!(l.polygonization_defaulted);
        let l = DomainSpec::from_json_str(r#"{"schema":1,"kind":"rectangle","length":2,"width":1}"#)
            .unwrap();
        assert!(!l.polygonization_defaulted);
    }

    #[test]
    fn documented_example_parses() {
        let l = DomainSpec::from_json_str(
            r#"{"schema":1, "kind":"ellipse", "a":2.0, "b":1.0, "polygonization_n":256}"#,
        )
        .unwrap();
        assert_eq!(l.spec, DomainSpec::ellipse(2.0, 1.0, 256));
    }

    #[test]
    fn random_is_deterministic() {
        let a = DomainSpec::random_convex(7, 20).realize().unwrap();
        let b = DomainSpec::random_convex(7, 20).realize().unwrap();
        assert_eq!(a.vertices(), b.vertices());
        let c = DomainSpec::random_convex(8, 20).realize().unwrap();
        assert_ne!(a.vertices(), c.vertices());
    }

    #[test]
    fn bad_parameters() {
        assert!(DomainSpec::ellipse(1.0, 2.0, 64).realize().is_err());
        assert!(DomainSpec::rectangle(-1.0, 1.0).realize().is_err());
        assert!(DomainSpec::random_convex(1, 3).realize().is_err());
    }
}
