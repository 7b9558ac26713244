//! Pieces of the fundamental domain on either side of a Hamiltonian cycle
//! and their images under group elements.
//!
//! The complement of the closed disks has one interstice per face of the
//! contact graph. An interstice is stored as a chain of circular arcs, each
//! given by its start, middle and end point, so that group elements can be
//! applied pointwise. The chain is traversed with the region on the left;
//! every reflection flips that, which `reversed` records.

use num_complex::Complex64;

use super::{KissingGroup, Word};
use crate::error::{GraphError, GroupError};
use crate::geometry::{Isometry, SpherePoint};

type C = Complex64;

const SAMPLES_PER_ARC: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    /// Generator whose circle carried the arc before any group element was applied.
    pub circle: usize,
    pub points: [SpherePoint<f64>; 3],
}

#[derive(Debug, Clone)]
pub struct Tile {
    pub word: Word,
    pub face: usize,
    /// +1 for faces left of the cycle, -1 for faces on its right.
    pub side: i8,
    pub arcs: Vec<Arc>,
    /// The boundary is traversed with the region on the right.
    pub reversed: bool,
}

fn arc_samples(a: C, m: C, b: C, k: usize) -> Vec<C> {
    let d = 2.0 * (a.re * (m.im - b.im) + m.re * (b.im - a.im) + b.re * (a.im - m.im));
    let scale = (a - m).norm().max((b - m).norm()).max(1e-300);
    if d.abs() < 1e-12 * scale * scale {
        // nearly straight: two segments through the middle point
        let mut out: Vec<C> = (0..k / 2).map(|i| a + (m - a) * (i as f64 / (k / 2) as f64)).collect();
        out.extend((0..k - k / 2).map(|i| m + (b - m) * (i as f64 / (k - k / 2) as f64)));
        return out;
    }
    let (a2, m2, b2) = (a.norm_sqr(), m.norm_sqr(), b.norm_sqr());
    let center = C::new(
        (a2 * (m.im - b.im) + m2 * (b.im - a.im) + b2 * (a.im - m.im)) / d,
        (a2 * (b.re - m.re) + m2 * (a.re - b.re) + b2 * (m.re - a.re)) / d,
    );
    let r = (a - center).norm();
    let tau = std::f64::consts::TAU;
    let ta = (a - center).arg();
    let to_m = ((m - center).arg() - ta).rem_euclid(tau);
    let to_b = ((b - center).arg() - ta).rem_euclid(tau);
    let sweep = if to_m <= to_b { to_b } else { to_b - tau };
    (0..k).map(|i| center + C::from_polar(r, ta + sweep * i as f64 / k as f64)).collect()
}

impl Tile {
    /// Boundary polygon sampled along the arcs, or `None` if it passes
    /// through infinity.
    pub fn polyline(&self) -> Option<Vec<C>> {
        let mut out = Vec::with_capacity(self.arcs.len() * SAMPLES_PER_ARC);
        for arc in &self.arcs {
            let [a, m, b] = arc.points.map(|p| p.to_finite());
            out.extend(arc_samples(a?, m?, b?, SAMPLES_PER_ARC));
        }
        Some(out)
    }

    /// Whether the tile's region contains `z` (boundary points are undefined).
    pub fn contains(&self, z: C) -> bool {
        let Some(poly) = self.polyline() else {
            return false;
        };
        let area: f64 = (0..poly.len())
            .map(|i| {
                let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
                p.re * q.im - q.re * p.im
            })
            .sum();
        let o = if self.reversed { -1.0 } else { 1.0 };
        let bounded = area * o > 0.0;
        let w = winding(&poly, z);
        if bounded {
            w != 0
        } else {
            w == 0
        }
    }
}

fn winding(poly: &[C], z: C) -> i64 {
    let mut total = 0.0;
    for i in 0..poly.len() {
        let (p, q) = (poly[i] - z, poly[(i + 1) % poly.len()] - z);
        total += (q / p).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

fn apply_tile(t: &Tile, g: &Isometry<f64>, word: Word) -> Tile {
    Tile {
        word,
        face: t.face,
        side: t.side,
        arcs: t
            .arcs
            .iter()
            .map(|a| Arc {
                circle: a.circle,
                points: a.points.map(|p| g.apply(p).normalized()),
            })
            .collect(),
        reversed: t.reversed != g.is_reversing(),
    }
}

impl KissingGroup {
    /// Interstices of the packing, one per face, with their side relative to
    /// the Hamiltonian cycle.
    pub fn interstices(&self, cycle: &[usize]) -> Result<Vec<Tile>, GroupError> {
        let p = &self.packing;
        let g = &p.graph;
        let n = g.vertex_count();
        let bad = |m: String| GroupError::Graph(GraphError::NotHamiltonianCycle(m));
        if cycle.len() != n {
            return Err(bad(format!("cycle has {} vertices, graph has {n}", cycle.len())));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in cycle.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(bad(format!("vertex {v} repeated or out of range")));
            }
            pos[v] = i;
        }
        // side of every corner: left iff its dart lies counterclockwise from
        // the dart to the successor and before the dart to the predecessor
        let mut side_of_dart = vec![0i8; g.dart_count()];
        for i in 0..n {
            let v = cycle[i];
            let succ = cycle[(i + 1) % n];
            let pred = cycle[(i + n - 1) % n];
            let start = g.dart_between(v, succ).ok_or_else(|| bad(format!("{v} and {succ} are not adjacent")))?;
            let mut s = 1;
            let mut d = start;
            loop {
                if g.target(d) == pred && d != start {
                    s = -1;
                }
                side_of_dart[d] = s;
                d = g.next(d);
                if d == start {
                    break;
                }
            }
        }
        let mut out = Vec::new();
        for (f, darts) in g.faces().iter().enumerate() {
            let k = darts.len();
            let mut arcs = Vec::with_capacity(k);
            for i in 0..k {
                let (d1, d2) = (darts[i], darts[(i + 1) % k]);
                let u2 = g.target(d1);
                let a = p.tangency_point(g.origin(d1), u2);
                let b = p.tangency_point(u2, g.target(d2));
                let c = p.circles[u2];
                let (ca, cb) = ((a - c.center()).arg(), (b - c.center()).arg());
                let mut sweep = (ca - cb).rem_euclid(std::f64::consts::TAU);
                if sweep < 1e-12 {
                    sweep = std::f64::consts::TAU;
                }
                let m = c.center() + C::from_polar(c.radius(), ca - sweep / 2.0);
                arcs.push(Arc {
                    circle: u2,
                    points: [a, m, b].map(SpherePoint::finite),
                });
            }
            out.push(Tile {
                word: Word::empty(),
                face: f,
                side: side_of_dart[darts[0]],
                arcs,
                reversed: false,
            });
        }
        Ok(out)
    }

    /// Images `g Π^+` and `g Π^-` over all reduced words `g` of length `l`,
    /// one tile per word and face.
    pub fn omega_side_tiles(&self, cycle: &[usize], l: usize) -> Result<(Vec<Tile>, Vec<Tile>), GroupError> {
        let base = self.interstices(cycle)?;
        let n = self.generators();
        let mut words = vec![Word::empty()];
        for _ in 0..l {
            words = words
                .iter()
                .flat_map(|w| (0..n).filter_map(move |j| w.push(j)))
                .collect();
        }
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for w in words {
            let g = self.element(&w)?;
            for t in &base {
                let img = apply_tile(t, &g, w.clone());
                if t.side > 0 {
                    plus.push(img);
                } else {
                    minus.push(img);
                }
            }
        }
        Ok((plus, minus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::regular_polygon_packing;

    #[test]
    fn square_interstices() {
        let g = KissingGroup::new(&regular_polygon_packing(3).unwrap()).unwrap();
        let (plus, minus) = g.omega_side_tiles(&[0, 1, 2, 3], 0).unwrap();
        assert_eq!((plus.len(), minus.len()), (1, 1));
        // the bounded interstice holds the origin, the other holds far points
        let inner = if plus[0].contains(C::new(0.0, 0.0)) { &plus[0] } else { &minus[0] };
        let outer = if std::ptr::eq(inner, &plus[0]) { &minus[0] } else { &plus[0] };
        assert!(inner.contains(C::new(0.0, 0.0)));
        assert!(!outer.contains(C::new(0.0, 0.0)));
        assert!(outer.contains(C::new(10.0, 3.0)));
        assert!(!inner.contains(C::new(10.0, 3.0)));
        // a point inside a disk is in neither
        assert!(!inner.contains(C::new(1.0, 1.0)) && !outer.contains(C::new(1.0, 1.0)));
        let (p1, m1) = g.omega_side_tiles(&[0, 1, 2, 3], 1).unwrap();
        assert_eq!((p1.len(), m1.len()), (4, 4));
        assert!(p1.iter().all(|t| t.reversed));
    }

    #[test]
    fn bad_cycle() {
        let g = KissingGroup::new(&regular_polygon_packing(3).unwrap()).unwrap();
        assert!(matches!(
            g.interstices(&[0, 2, 1, 3]),
            Err(GroupError::Graph(GraphError::NotHamiltonianCycle(_)))
        ));
    }

    #[test]
    fn k4_piece_counts() {
        let k4 = crate::graph::PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap();
        let g = KissingGroup::new(&crate::packing::solve_packing(&k4, 1e-9).unwrap()).unwrap();
        let (p0, m0) = g.omega_side_tiles(&[0, 1, 2, 3], 0).unwrap();
        assert_eq!((p0.len(), m0.len()), (2, 2));
        let (p1, m1) = g.omega_side_tiles(&[0, 1, 2, 3], 1).unwrap();
        assert_eq!((p1.len(), m1.len()), (8, 8));
        // every level-0 piece contains a sample point of its own and no other
        for t in p0.iter().chain(&m0) {
            let poly = t.polyline().unwrap();
            let c = poly.iter().sum::<C>() / poly.len() as f64;
            if t.contains(c) {
                assert_eq!(p0.iter().chain(&m0).filter(|s| s.contains(c)).count(), 1);
            }
        }
    }
}
