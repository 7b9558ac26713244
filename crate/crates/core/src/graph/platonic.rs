//! Contact graphs of the five Platonic solids.

use super::PlaneGraph;
use crate::error::GraphError;

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Graph of a convex polytope inscribed in a sphere about the origin, with
/// edges between points at minimal distance. Rotations are counterclockwise
/// seen from outside.
fn from_vertices(pts: &[[f64; 3]]) -> Result<PlaneGraph, GraphError> {
    let n = pts.len();
    let d2 = |i: usize, j: usize| dot(sub(pts[i], pts[j]), sub(pts[i], pts[j]));
    let min = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| d2(i, j))
        .fold(f64::INFINITY, f64::min);
    let rotation: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let p = pts[v];
            let mut nb: Vec<usize> = (0..n).filter(|&u| u != v && d2(u, v) < min * (1.0 + 1e-9)).collect();
            let tangent = |u: usize| {
                let t = sub(pts[u], p);
                let k = dot(t, p) / dot(p, p);
                sub(t, [k * p[0], k * p[1], k * p[2]])
            };
            let e1 = tangent(nb[0]);
            let e2 = cross(p, e1);
            nb.sort_by(|&a, &b| {
                let ang = |u: usize| {
                    let t = tangent(u);
                    dot(t, e2).atan2(dot(t, e1))
                };
                ang(a).total_cmp(&ang(b))
            });
            nb
        })
        .collect();
    PlaneGraph::from_rotation(n, &rotation)
}

pub fn tetrahedron() -> PlaneGraph {
    from_vertices(&[[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]).expect("tetrahedron")
}

pub fn octahedron() -> PlaneGraph {
    from_vertices(&[
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ])
    .expect("octahedron")
}

pub fn cube() -> PlaneGraph {
    let pts: Vec<[f64; 3]> = (0..8)
        .map(|k| {
            let s = |b: usize| if k >> b & 1 == 1 { 1.0 } else { -1.0 };
            [s(0), s(1), s(2)]
        })
        .collect();
    from_vertices(&pts).expect("cube")
}

pub fn icosahedron() -> PlaneGraph {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for a in [1.0, -1.0] {
        for b in [phi, -phi] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    from_vertices(&pts).expect("icosahedron")
}

pub fn dodecahedron() -> PlaneGraph {
    icosahedron().planar_dual()
}

/// The graph named `tetrahedron`, `octahedron`, `cube`, `icosahedron` or
/// `dodecahedron`.
pub fn platonic_graph(name: &str) -> Option<PlaneGraph> {
    Some(match name {
        "tetrahedron" => tetrahedron(),
        "octahedron" => octahedron(),
        "cube" => cube(),
        "icosahedron" => icosahedron(),
        "dodecahedron" => dodecahedron(),
        _ => return None,
    })
}
