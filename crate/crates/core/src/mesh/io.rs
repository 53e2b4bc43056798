//! Plain-text mesh dump:
//!
//! ```text
//! HSV-MESH 1
//! <vertex count> <triangle count>
//! x y            (one line per vertex)
//! i j k          (one line per triangle, zero-based, CCW)
//! ```

use std::fmt::Write as _;

use super::MeshError;
use crate::geometry::Point;

pub const MESH_DUMP_HEADER: &str = "HSV-MESH 1";

pub fn write_mesh_dump(vertices: &[Point], triangles: &[[usize; 3]]) -> String {
    let mut s = String::new();
    writeln!(s, "{MESH_DUMP_HEADER}").unwrap();
    writeln!(s, "{} {}", vertices.len(), triangles.len()).unwrap();
    for v in vertices {
        writeln!(s, "{:?} {:?}", v.x, v.y).unwrap();
    }
    for t in triangles {
        writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    s
}

pub fn read_mesh_dump(text: &str) -> Result<(Vec<Point>, Vec<[usize; 3]>), MeshError> {
    let bad = |m: &str| MeshError::Dump(m.to_string());
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(MESH_DUMP_HEADER) {
        return Err(bad("missing header"));
    }
    let counts: Vec<usize> = lines
        .next()
        .ok_or_else(|| bad("missing counts"))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("bad count")))
        .collect::<Result<_, _>>()?;
    let [nv, nt] = counts[..] else {
        return Err(bad("expected two counts"));
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let l = lines.next().ok_or_else(|| bad("truncated vertices"))?;
        let xy: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad coordinate")))
            .collect::<Result<_, _>>()?;
        let [x, y] = xy[..] else {
            return Err(bad("vertex needs two coordinates"));
        };
        vertices.push(Point::new(x, y));
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let l = lines.next().ok_or_else(|| bad("truncated triangles"))?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad index")))
            .collect::<Result<_, _>>()?;
        let [i, j, k] = ids[..] else {
            return Err(bad("triangle needs three indices"));
        };
        if i.max(j).max(k) >= nv {
            return Err(bad("index out of range"));
        }
        triangles.push([i, j, k]);
    }
    Ok((vertices, triangles))
}
