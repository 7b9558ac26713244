//! Circle packings with a prescribed plane contact graph.

mod augment;
mod solver;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, PackingError};
use crate::geometry::{Circle, Mobius, SpherePoint};
use crate::graph::{polygon_graph, GraphDocument, PlaneGraph};

pub use augment::{augment_to_triangulation, Augmented};
pub use solver::{disk_gap, face_angle, solve_packing, solve_packing_with, tangency_residual, PackingOptions};

type C = Complex64;

#[derive(Debug, Clone)]
pub struct CirclePacking {
    pub graph: PlaneGraph,
    /// One circle per vertex; each disk is the bounded side.
    pub circles: Vec<Circle<f64>>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactReport {
    pub max_residual: f64,
    /// Edge with the largest residual.
    pub worst_edge: Option<(usize, usize)>,
    /// Edges whose residual exceeds the tolerance.
    pub failing_edges: Vec<(usize, usize)>,
    /// Non-adjacent pairs whose closed disks come within the tolerance.
    pub spurious: Vec<(usize, usize)>,
    /// Smallest gap between disks of non-adjacent vertices.
    pub min_gap: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceFit {
    pub face: usize,
    pub center: (f64, f64),
    pub radius: f64,
    /// Largest distance from a tangency point to the fitted circle.
    pub fit_residual: f64,
    /// Largest `|cos|` of the intersection angle with a boundary circle.
    pub orthogonality_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleRecord {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub orient: i8,
}

/// JSON form of a packing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingDocument {
    pub graph: GraphDocument,
    pub circles: Vec<CircleRecord>,
    pub residual: f64,
}

impl CirclePacking {
    pub fn new(graph: PlaneGraph, circles: Vec<Circle<f64>>, tolerance: f64) -> Self {
        Self {
            graph,
            circles,
            tolerance,
        }
    }

    /// Point where the circles of `u` and `v` touch (or the midpoint of the
    /// gap along the line of centers).
    pub fn tangency_point(&self, u: usize, v: usize) -> C {
        let (a, b) = (&self.circles[u], &self.circles[v]);
        let (ca, cb) = (a.center(), b.center());
        let dist = (cb - ca).norm();
        let dir = (cb - ca) / dist;
        let excess = dist - a.radius() - b.radius();
        ca + dir * (a.radius() + excess / 2.0)
    }

    pub fn max_residual(&self) -> f64 {
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| tangency_residual(&self.circles[u], &self.circles[v]))
            .fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> PackingDocument {
        PackingDocument {
            graph: self.graph.to_document(),
            circles: self
                .circles
                .iter()
                .map(|c| {
                    let z = c.center();
                    CircleRecord {
                        cx: z.re,
                        cy: z.im,
                        r: c.radius(),
                        orient: c.orientation(),
                    }
                })
                .collect(),
            residual: self.max_residual(),
        }
    }

    pub fn from_document(doc: &PackingDocument, tolerance: f64) -> Result<Self, PackingError> {
        let graph = PlaneGraph::from_document(&doc.graph)?;
        if doc.circles.len() != graph.vertex_count() {
            return Err(PackingError::Mismatch(format!(
                "{} circles for {} vertices",
                doc.circles.len(),
                graph.vertex_count()
            )));
        }
        let circles = doc
            .circles
            .iter()
            .map(|r| {
                let c = Circle::new(C::new(r.cx, r.cy), r.r);
                if r.orient < 0 {
                    c.reversed()
                } else {
                    c
                }
            })
            .collect();
        Ok(Self::new(graph, circles, tolerance))
    }
}

/// Circles orthogonal to the unit circle through consecutive `(d+1)`-st roots
/// of unity.
pub fn regular_polygon_packing(d: usize) -> Result<CirclePacking, GraphError> {
    let graph = polygon_graph(d)?;
    let n = d + 1;
    let t = std::f64::consts::PI / n as f64;
    let circles = (0..n)
        .map(|j| Circle::new(C::from_polar(1.0 / t.cos(), t * (2 * j + 1) as f64), t.tan()))
        .collect();
    Ok(CirclePacking::new(graph, circles, 1e-12))
}

/// Checks tangency along edges and disjointness elsewhere.
pub fn verify_contact(p: &CirclePacking) -> ContactReport {
    let g = &p.graph;
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    let mut max_residual: f64 = 0.0;
    let mut worst_edge = None;
    let mut failing_edges = Vec::new();
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
        let r = tangency_residual(&p.circles[u], &p.circles[v]);
        if !(r <= max_residual) {
            max_residual = r;
            worst_edge = Some((u.min(v), u.max(v)));
        }
        if !(r <= p.tolerance) {
            failing_edges.push((u.min(v), u.max(v)));
        }
    }
    let mut spurious = Vec::new();
    let mut min_gap: Option<f64> = None;
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] {
                continue;
            }
            let (a, b) = (&p.circles[u], &p.circles[v]);
            let gap = disk_gap(a, b);
            min_gap = Some(min_gap.map_or(gap, |m| m.min(gap)));
            if !(gap > p.tolerance) {
                spurious.push((u, v));
            }
        }
    }
    failing_edges.sort_unstable();
    let pass = failing_edges.is_empty() && spurious.is_empty();
    ContactReport {
        max_residual,
        worst_edge,
        failing_edges,
        spurious,
        min_gap,
        pass,
    }
}

/// Applies the Möbius map sending `points` to `targets` to every circle.
pub fn normalize(p: &CirclePacking, points: [C; 3], targets: [C; 3]) -> Result<CirclePacking, PackingError> {
    let m = Mobius::from_three_points(points.map(SpherePoint::finite), targets.map(SpherePoint::finite))
        .ok_or(PackingError::DegeneratePoints)?;
    let circles = p.circles.iter().map(|c| m.apply_circle(c)).collect();
    Ok(CirclePacking::new(p.graph.clone(), circles, p.tolerance))
}

/// Fits a circle through the tangency points around each face and reports
/// how far it is from being orthogonal to the circles on the face. Only
/// meaningful as a diagnostic: the fit is exact for triangles, while for
/// longer faces the points are concyclic only for special normalizations.
pub fn dual_orthocircle_fit(p: &CirclePacking) -> Result<Vec<FaceFit>, PackingError> {
    let g = &p.graph;
    if !(g.is_simple() && g.connectivity() >= 3) {
        return Err(PackingError::NotPolyhedral);
    }
    let mut out = Vec::new();
    for (f, darts) in g.faces().iter().enumerate() {
        let pts: Vec<C> = darts.iter().map(|&d| p.tangency_point(g.origin(d), g.target(d))).collect();
        // algebraic fit of |z|^2 + 2 Re(conj(b) z) + e = 0
        let mut ata = Matrix3::<f64>::zeros();
        let mut atb = Vector3::<f64>::zeros();
        for z in &pts {
            let row = Vector3::new(2.0 * z.re, 2.0 * z.im, 1.0);
            ata += row * row.transpose();
            atb += row * (-z.norm_sqr());
        }
        let sol = ata.lu().solve(&atb).ok_or(PackingError::DegeneratePoints)?;
        let circle = Circle::from_form(1.0, C::new(sol[0], sol[1]), sol[2]);
        let (c, r) = (circle.center(), circle.radius());
        let fit_residual = pts.iter().map(|z| ((z - c).norm() - r).abs()).fold(0.0, f64::max);
        let orthogonality_defect = darts
            .iter()
            .map(|&d| circle.inversive_distance(&p.circles[g.origin(d)]).abs())
            .fold(0.0, f64::max);
        out.push(FaceFit {
            face: f,
            center: (c.re, c.im),
            radius: r,
            fit_residual,
            orthogonality_defect,
        });
    }
    Ok(out)
}
