//! SVG figure: the domain in gray with the exclusion region painted white
//! over it, so the gray band is where critical points are allowed.
//! Interior critical points are red, boundary extrema blue.
//!
//! Output is a pure function of the scene. Coordinates are printed with a
//! fixed number of decimals and the y axis is flipped so the figure has
//! the usual orientation.

use std::fmt::Write as _;

use crate::geometry::{ConvexPolygon, ExclusionRegion, Point};
use crate::mesh::TriMesh;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SvgOptions {
    pub show_nodal: bool,
    pub show_mesh: bool,
}

pub struct Scene<'a> {
    pub polygon: &'a ConvexPolygon,
    pub region: &'a ExclusionRegion,
    pub critical_points: Vec<Point>,
    pub boundary_extrema: Vec<Point>,
    pub nodal: Option<&'a [(Point, Point)]>,
    pub mesh: Option<&'a TriMesh>,
}

const MARGIN: f64 = 0.05;
const CANVAS: f64 = 800.0;

struct Frame {
    scale: f64,
    decimals: usize,
}

impl Frame {
    fn pt(&self, p: Point) -> String {
        let d = self.decimals;
        let y = -p.y;
        // avoid printing "-0.000"
        let fix = |v: f64| if v == 0.0 { 0.0 } else { v };
        format!("{:.d$},{:.d$}", fix(p.x), fix(y))
    }

    fn num(&self, v: f64) -> String {
        format!("{:.*}", self.decimals, v)
    }

    fn path(&self, pts: impl IntoIterator<Item = Point>) -> String {
        let mut s = String::new();
        for (i, p) in pts.into_iter().enumerate() {
            s.push_str(if i == 0 { "M" } else { " L" });
            s.push_str(&self.pt(p));
        }
        s.push_str(" Z");
        s
    }
}

pub fn render_svg(scene: &Scene) -> String {
    let verts = scene.polygon.vertices();
    let (mut lo, mut hi) = (verts[0], verts[0]);
    for v in verts {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    let pad = MARGIN * extent;
    // Enough decimals to resolve 1e-4 of the extent.
    let decimals = (4.0 - extent.log10().floor()).clamp(0.0, 12.0) as usize;
    let f = Frame {
        scale: extent,
        decimals,
    };
    let (x0, y0) = (lo.x - pad, -(hi.y + pad));
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = f.num(2e-3 * f.scale);
    let thin = f.num(5e-4 * f.scale);
    let dot = f.num(8e-3 * f.scale);

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        f.num(CANVAS),
        f.num(CANVAS * h / w),
        f.num(x0),
        f.num(y0),
        f.num(w),
        f.num(h)
    )
    .unwrap();
    writeln!(s, r##"<path id="domain" d="{}" fill="#b3b3b3" stroke="none"/>"##, f.path(verts.iter().copied())).unwrap();
    writeln!(
        s,
        r##"<path id="exclusion" d="{}" fill="#ffffff" stroke="none"/>"##,
        f.path(scene.region.boundary.iter().copied())
    )
    .unwrap();
    if let Some(mesh) = scene.mesh {
        let mut d = String::new();
        for (a, b) in mesh.edges() {
            write!(d, "M{} L{} ", f.pt(mesh.vertices[a]), f.pt(mesh.vertices[b])).unwrap();
        }
        writeln!(
            s,
            r##"<path id="mesh" d="{}" fill="none" stroke="#606060" stroke-width="{thin}"/>"##,
            d.trim_end()
        )
        .unwrap();
    }
    if let Some(segments) = scene.nodal {
        let mut d = String::new();
        for &(a, b) in segments {
            write!(d, "M{} L{} ", f.pt(a), f.pt(b)).unwrap();
        }
        writeln!(
            s,
            r##"<path id="nodal" d="{}" fill="none" stroke="#1a7f37" stroke-width="{stroke}"/>"##,
            d.trim_end()
        )
        .unwrap();
    }
    writeln!(
        s,
        r##"<path id="boundary" d="{}" fill="none" stroke="#000000" stroke-width="{stroke}"/>"##,
        f.path(verts.iter().copied())
    )
    .unwrap();
    for (group, color, points) in [
        ("boundary-extrema", "#1f4fd1", &scene.boundary_extrema),
        ("critical-points", "#d11f1f", &scene.critical_points),
    ] {
        writeln!(s, r#"<g id="{group}" fill="{color}">"#).unwrap();
        for p in points {
            let c = f.pt(*p);
            let (cx, cy) = c.split_once(',').unwrap();
            writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="{dot}"/>"#).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}
