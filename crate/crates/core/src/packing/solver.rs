//! Maximal packing of a triangulated disk in the hyperbolic plane.
//!
//! One added face vertex plays the role of the outer circle. Its neighbors
//! become horocycles and every other vertex gets a finite hyperbolic radius
//! `h`, stored as `s = exp(-h)` (so horocycles have `s = 0`). Radii are found
//! by Gauss-Seidel sweeps, each of which sets one radius so that its angle
//! sum is exactly `2 pi`, followed by Newton polishing on the whole system.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::augment::augment_to_triangulation;
use super::CirclePacking;
use crate::error::PackingError;
use crate::geometry::{Circle, Mobius};
use crate::graph::PlaneGraph;

type C = Complex64;

/// Solver controls.
#[derive(Debug, Clone, Copy)]
pub struct PackingOptions {
    /// Maximal tangency residual accepted in the output.
    pub tol: f64,
    /// Cap on Gauss-Seidel sweeps before giving up.
    pub max_iters: usize,
    /// Target for the largest angle-sum error.
    pub angle_tol: f64,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 20_000,
            angle_tol: 1e-11,
        }
    }
}

/// Angle at a circle with s-radius `s0` in the triangle formed with
/// neighbors of s-radii `s1`, `s2`.
pub fn face_angle(s0: f64, s1: f64, s2: f64) -> f64 {
    let y = s0 * ((1.0 - s1 * s1) * (1.0 - s2 * s2)).max(0.0).sqrt();
    let x = ((1.0 - s0 * s0) * (1.0 - s0 * s0 * s1 * s1 * s2 * s2)).max(0.0).sqrt();
    2.0 * y.atan2(x)
}

struct Disk {
    /// s-radius per vertex; 0 for horocycles. Unused for the outer vertex.
    s: Vec<f64>,
    interior: Vec<usize>,
    /// Cyclic neighbor lists of interior vertices.
    flower: Vec<Vec<usize>>,
}

impl Disk {
    fn angle_sum(&self, v: usize, s0: f64) -> f64 {
        let f = &self.flower[v];
        let k = f.len();
        (0..k).map(|i| face_angle(s0, self.s[f[i]], self.s[f[(i + 1) % k]])).sum()
    }

    fn max_error(&self) -> f64 {
        self.interior
            .iter()
            .map(|&v| (self.angle_sum(v, self.s[v]) - std::f64::consts::TAU).abs())
            .fold(0.0, f64::max)
    }

    /// Exact one-dimensional solve: the angle sum grows from 0 to `k pi` as
    /// `s0` runs over (0, 1).
    fn relax(&mut self, v: usize) {
        let target = std::f64::consts::TAU;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut x = self.s[v];
        for _ in 0..100 {
            let f = self.angle_sum(v, x) - target;
            if f.abs() < 1e-15 {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            // secant-free Newton via a small symmetric difference
            let h = 1e-7 * x.min(1.0 - x).max(1e-12);
            let df = (self.angle_sum(v, x + h) - self.angle_sum(v, x - h)) / (2.0 * h);
            let mut nx = if df > 0.0 { x - f / df } else { f64::NAN };
            if !(nx > lo && nx < hi) {
                nx = 0.5 * (lo + hi);
            }
            if (nx - x).abs() < 1e-16 {
                x = nx;
                break;
            }
            x = nx;
        }
        self.s[v] = x;
    }

    /// One Newton step in the hyperbolic radii `h = -ln s`. Returns false if
    /// no step reduced the residual.
    fn newton(&mut self) -> bool {
        let target = std::f64::consts::TAU;
        let m = self.interior.len();
        let mut pos = vec![usize::MAX; self.s.len()];
        for (i, &v) in self.interior.iter().enumerate() {
            pos[v] = i;
        }
        let residual = |d: &Disk| -> DVector<f64> {
            DVector::from_iterator(m, d.interior.iter().map(|&v| d.angle_sum(v, d.s[v]) - target))
        };
        let f0 = residual(self);
        let n0 = f0.amax();
        let mut jac = DMatrix::<f64>::zeros(m, m);
        let interior = self.interior.clone();
        for (j, &v) in interior.iter().enumerate() {
            let h = -self.s[v].ln();
            let dh = 1e-6 * h.max(1e-3);
            let saved = self.s[v];
            let col = |sign: f64, this: &mut Disk| -> Vec<(usize, f64)> {
                this.s[v] = (-(h + sign * dh)).exp();
                let mut out = vec![(j, this.angle_sum(v, this.s[v]))];
                for &u in &this.flower[v] {
                    if pos[u] != usize::MAX {
                        out.push((pos[u], this.angle_sum(u, this.s[u])));
                    }
                }
                out
            };
            let plus = col(1.0, self);
            let minus = col(-1.0, self);
            self.s[v] = saved;
            for (a, b) in plus.iter().zip(&minus) {
                jac[(a.0, j)] = (a.1 - b.1) / (2.0 * dh);
            }
        }
        let Some(step) = jac.lu().solve(&(-&f0)) else {
            return false;
        };
        let saved = self.s.clone();
        let mut t = 1.0;
        for _ in 0..30 {
            for (i, &v) in self.interior.iter().enumerate() {
                let h = -saved[v].ln() + t * step[i];
                self.s[v] = (-h.max(1e-12)).exp();
            }
            if residual(self).amax() < n0 {
                return true;
            }
            t *= 0.5;
        }
        self.s = saved;
        false
    }
}

/// Chooses the outer face: the one with the longest boundary, lowest id on ties.
fn outer_face(g: &PlaneGraph) -> usize {
    let mut best = 0;
    for f in 0..g.face_count() {
        if g.faces()[f].len() > g.faces()[best].len() {
            best = f;
        }
    }
    best
}

fn hyperbolic_radii(t: &PlaneGraph, outer: usize, opts: &PackingOptions) -> Result<Disk, PackingError> {
    let total = t.vertex_count();
    let mut boundary = vec![false; total];
    for u in t.neighbors(outer) {
        boundary[u] = true;
    }
    let interior: Vec<usize> = (0..total).filter(|&v| v != outer && !boundary[v]).collect();
    let mut s = vec![0.0; total];
    let mut flower = vec![Vec::new(); total];
    for &v in &interior {
        s[v] = 0.5;
        flower[v] = t.neighbors(v);
    }
    let mut disk = Disk { s, interior, flower };
    let order = disk.interior.clone();
    let mut sweeps = 0;
    let mut err = disk.max_error();
    // a few sweeps to get into Newton's basin, then polish
    while err > opts.angle_tol && sweeps < opts.max_iters {
        if sweeps >= 8 && disk.newton() {
            sweeps += 1;
            err = disk.max_error();
            continue;
        }
        for &v in &order {
            disk.relax(v);
        }
        sweeps += 1;
        err = disk.max_error();
    }
    if err > opts.angle_tol {
        return Err(PackingError::NoConvergence {
            max_iters: opts.max_iters,
            error: err,
        });
    }
    Ok(disk)
}

/// Disk automorphism sending `z` to the origin.
fn to_origin(z: C) -> Mobius<f64> {
    Mobius::new(C::new(1.0, 0.0), -z, -z.conj(), C::new(1.0, 0.0))
}

/// Frame for a horocycle pivot: the disk goes to the upper half-plane with
/// the horocycle's ideal point at infinity and the horocycle itself on the
/// line `Im z = 1`.
fn horocycle_frame(zeta: C, circle: &Circle<f64>) -> Mobius<f64> {
    let i = C::new(0.0, 1.0);
    let k = Mobius::new(i, i * zeta, C::new(-1.0, 0.0), zeta);
    let far = zeta * (1.0 - 2.0 * circle.radius());
    let height = k.apply_finite(far).to_finite().expect("finite").im;
    Mobius::new(i / height, i * zeta / height, C::new(-1.0, 0.0), zeta)
}

fn lay_out(t: &PlaneGraph, outer: usize, disk: &Disk) -> Vec<Circle<f64>> {
    let total = t.vertex_count();
    // hyperbolic center for interior vertices, ideal point for horocycles
    let mut pos: Vec<Option<C>> = vec![None; total];
    let mut circles = vec![Circle::unit().reversed(); total];
    let root = disk.interior[0];
    pos[root] = Some(C::new(0.0, 0.0));
    circles[root] = Circle::new(C::new(0.0, 0.0), (-disk.s[root].ln() / 2.0).tanh());
    let mut queue = std::collections::VecDeque::from([root]);
    let is_interior = |v: usize| v != outer && disk.s[v] > 0.0;
    while let Some(v) = queue.pop_front() {
        let zv = pos[v].expect("queued vertices are placed");
        let mut place = |a: usize, p: C, c: Circle<f64>, pos: &mut Vec<Option<C>>, circles: &mut Vec<Circle<f64>>| {
            pos[a] = Some(p);
            circles[a] = c;
            queue.push_back(a);
        };
        if is_interior(v) {
            let f = &disk.flower[v];
            let k = f.len();
            let t_v = to_origin(zv);
            let back = t_v.inverse();
            let start = f.iter().position(|&u| pos[u].is_some()).unwrap_or(0);
            let mut dir = match pos[f[start]] {
                Some(z) => t_v.apply_finite(z).to_finite().expect("finite").arg(),
                None => 0.0,
            };
            let hv = -disk.s[v].ln();
            let rho = (hv / 2.0).tanh();
            for step in 0..k {
                let a = f[(start + step) % k];
                if pos[a].is_none() {
                    let e = C::from_polar(1.0, dir);
                    if is_interior(a) {
                        let ha = -disk.s[a].ln();
                        let w = back.apply_finite(e * ((hv + ha) / 2.0).tanh()).to_finite().expect("finite");
                        let c = to_origin(w).inverse().apply_circle(&Circle::new(C::new(0.0, 0.0), (ha / 2.0).tanh()));
                        place(a, w, c, &mut pos, &mut circles);
                    } else {
                        let z = back.apply_finite(e).to_finite().expect("finite");
                        let c = back.apply_circle(&Circle::new(e * ((1.0 + rho) / 2.0), (1.0 - rho) / 2.0));
                        place(a, z / z.norm(), c, &mut pos, &mut circles);
                    }
                }
                let b = f[(start + step + 1) % k];
                dir += face_angle(disk.s[v], disk.s[a], disk.s[b]);
            }
        } else {
            // petals in counterclockwise order, starting after the outer vertex
            let nb = t.neighbors(v);
            let o = nb.iter().position(|&u| u == outer).expect("boundary vertex touches the outer one");
            let k = nb.len();
            let petals: Vec<usize> = (1..k).map(|i| nb[(o + i) % k]).collect();
            let frame = horocycle_frame(zv, &circles[v]);
            let back = frame.inverse();
            let Some(start) = petals.iter().position(|&u| pos[u].is_some()) else {
                continue;
            };
            let size = |u: usize| (1.0 - disk.s[u] * disk.s[u]) / 2.0;
            let mut x = frame.apply_circle(&circles[petals[start]]).center().re;
            for j in start + 1..petals.len() {
                let (prev, a) = (petals[j - 1], petals[j]);
                x += 2.0 * (size(prev) * size(a)).sqrt();
                if pos[a].is_none() {
                    let sa = disk.s[a];
                    let c = back.apply_circle(&Circle::new(C::new(x, (1.0 + sa * sa) / 2.0), size(a)));
                    let p = back.apply_finite(C::new(x, sa)).to_finite().expect("finite");
                    let p = if is_interior(a) { p } else { p / p.norm() };
                    place(a, p, c, &mut pos, &mut circles);
                }
            }
            let mut x = frame.apply_circle(&circles[petals[start]]).center().re;
            for j in (0..start).rev() {
                let (next, a) = (petals[j + 1], petals[j]);
                x -= 2.0 * (size(next) * size(a)).sqrt();
                if pos[a].is_none() {
                    let sa = disk.s[a];
                    let c = back.apply_circle(&Circle::new(C::new(x, (1.0 + sa * sa) / 2.0), size(a)));
                    let p = back.apply_finite(C::new(x, sa)).to_finite().expect("finite");
                    let p = if is_interior(a) { p } else { p / p.norm() };
                    place(a, p, c, &mut pos, &mut circles);
                }
            }
        }
    }
    debug_assert!((0..total).all(|v| v == outer || pos[v].is_some()));
    circles
}

/// Euclidean gap between two disks: positive when apart, zero when tangent,
/// negative when they overlap. Half-planes and complements are allowed.
pub fn disk_gap(a: &Circle<f64>, b: &Circle<f64>) -> f64 {
    let half_plane_offset = |l: &Circle<f64>, z: C| (2.0 * (l.b.conj() * z).re + l.d) / (2.0 * l.b.norm());
    match (a.is_line(), b.is_line()) {
        (false, false) => {
            let dist = (a.center() - b.center()).norm();
            match (a.orientation(), b.orientation()) {
                (1, 1) => dist - a.radius() - b.radius(),
                (-1, 1) => a.radius() - dist - b.radius(),
                (1, -1) => b.radius() - dist - a.radius(),
                _ => f64::NEG_INFINITY,
            }
        }
        (true, false) | (false, true) => {
            let (l, c) = if a.is_line() { (a, b) } else { (b, a) };
            if c.orientation() < 0 {
                return f64::NEG_INFINITY;
            }
            half_plane_offset(l, c.center()) - c.radius()
        }
        (true, true) => {
            let w = a.b.conj() * b.b;
            // half-planes facing away from each other still touch at infinity
            let apart = w.im.abs() <= 1e-12 * a.b.norm() * b.b.norm() && w.re < 0.0;
            let width = a.d / (2.0 * a.b.norm()) + b.d / (2.0 * b.b.norm());
            if apart && width >= 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        }
    }
}

/// Euclidean tangency residual of two circles.
pub fn tangency_residual(a: &Circle<f64>, b: &Circle<f64>) -> f64 {
    disk_gap(a, b).abs()
}

/// Packs a connected simple plane graph inside the unit disk.
pub fn solve_packing(g: &PlaneGraph, tol: f64) -> Result<CirclePacking, PackingError> {
    solve_packing_with(g, &PackingOptions { tol, ..Default::default() })
}

pub fn solve_packing_with(g: &PlaneGraph, opts: &PackingOptions) -> Result<CirclePacking, PackingError> {
    if !g.is_simple() {
        return Err(crate::error::GraphError::NotSimple.into());
    }
    let n = g.vertex_count();
    if n <= 2 {
        let circles = if n == 1 {
            vec![Circle::new(C::new(0.0, 0.0), 0.5)]
        } else {
            vec![Circle::new(C::new(-0.5, 0.0), 0.5), Circle::new(C::new(0.5, 0.0), 0.5)]
        };
        return Ok(CirclePacking::new(g.clone(), circles, opts.tol));
    }
    let aug = augment_to_triangulation(g)?;
    let outer = aug.face_center[outer_face(g)];
    let disk = hyperbolic_radii(&aug.graph, outer, opts)?;
    let all = lay_out(&aug.graph, outer, &disk);
    let t = &aug.graph;
    let mut worst: f64 = 0.0;
    for (u, v) in t.edges() {
        if u == outer || v == outer {
            let w = if u == outer { v } else { u };
            let c = &all[w];
            worst = worst.max((1.0 - c.center().norm() - c.radius()).abs());
        } else {
            worst = worst.max(tangency_residual(&all[u], &all[v]));
        }
    }
    if !(worst <= opts.tol) {
        return Err(PackingError::ResidualTooLarge {
            residual: worst,
            tol: opts.tol,
        });
    }
    Ok(CirclePacking::new(g.clone(), all[..n].to_vec(), opts.tol))
}
