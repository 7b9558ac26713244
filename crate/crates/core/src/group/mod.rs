//! The reflection group generated by the circles of a packing.

mod levels;
mod tiles;

use serde::Serialize;

use crate::error::GroupError;
use crate::geometry::{AntiMobius, Circle, Isometry, Mobius, SpherePoint};
use crate::packing::CirclePacking;

pub use levels::{tangency_components, DiskLevel, LevelDisk, LimitCover, DEFAULT_DISK_CAP};
pub use tiles::{Arc, Tile};

/// Reflection in a circle.
pub fn reflection(c: &Circle<f64>) -> Result<AntiMobius<f64>, GroupError> {
    AntiMobius::reflection(c).ok_or(GroupError::DegenerateCircle)
}

/// A reduced word in the generators: no two consecutive letters agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self, GroupError> {
        if let Some(i) = letters.windows(2).position(|w| w[0] == w[1]) {
            return Err(GroupError::WordNotReduced(i + 1));
        }
        Ok(Self(letters))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// The word followed by one more letter, if that keeps it reduced.
    pub fn push(&self, j: usize) -> Option<Self> {
        if self.last() == Some(j) {
            return None;
        }
        let mut v = self.0.clone();
        v.push(j);
        Some(Self(v))
    }
}

/// Outcome of one step of the Nielsen map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NielsenStep {
    pub point: SpherePoint<f64>,
    pub index: usize,
    /// The point lay on more than one closed disk (a cusp).
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cusp {
    pub edge: (usize, usize),
    pub point: (f64, f64),
    /// `|trace|` of the normalized composite of the two reflections.
    pub trace_abs: f64,
    /// Chordal distance between the cusp and its image under the composite.
    pub fixed_residual: f64,
}

#[derive(Debug, Clone)]
pub struct KissingGroup {
    pub packing: CirclePacking,
    pub reflections: Vec<AntiMobius<f64>>,
    /// Tolerance for tangency and closed-disk membership.
    pub tol: f64,
}

impl KissingGroup {
    pub fn new(p: &CirclePacking) -> Result<Self, GroupError> {
        let reflections = p.circles.iter().map(reflection).collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            packing: p.clone(),
            reflections,
            tol: (10.0 * p.tolerance).max(1e-9),
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn generators(&self) -> usize {
        self.reflections.len()
    }

    fn check(&self, w: &Word) -> Result<(), GroupError> {
        let n = self.generators();
        match w.letters().iter().find(|&&i| i >= n) {
            Some(&index) => Err(GroupError::BadGenerator { index, n }),
            None => Ok(()),
        }
    }

    /// The group element `g_{i_1} ∘ ... ∘ g_{i_l}`.
    pub fn element(&self, w: &Word) -> Result<Isometry<f64>, GroupError> {
        self.check(w)?;
        let mut g = Isometry::identity();
        for &i in w.letters() {
            g = normalized(g.then_reflect_first(&self.reflections[i]));
        }
        Ok(g)
    }

    pub fn apply_point(&self, w: &Word, z: SpherePoint<f64>) -> Result<SpherePoint<f64>, GroupError> {
        Ok(self.element(w)?.apply(z).normalized())
    }

    pub fn apply_circle(&self, w: &Word, c: &Circle<f64>) -> Result<Circle<f64>, GroupError> {
        Ok(self.element(w)?.apply_circle(c).normalized())
    }

    /// One tangency point per edge together with its parabolicity certificate.
    pub fn cusp_points(&self) -> Vec<Cusp> {
        let p = &self.packing;
        p.graph
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let (u, v) = (u.min(v), u.max(v));
                let z = p.tangency_point(u, v);
                // conjugate by the translation moving the cusp to 0, where
                // both circles have coordinates of their own size
                let local = |c: &Circle<f64>| {
                    let c = if c.is_line() {
                        Circle::from_form(0.0, c.b, c.d + 2.0 * (c.b.conj() * z).re)
                    } else {
                        Circle::new(c.center() - z, c.radius())
                    };
                    reflection(&c)
                };
                let origin = SpherePoint::finite(num_complex::Complex64::new(0.0, 0.0));
                let (trace_abs, fixed_residual) = match (local(&p.circles[u]), local(&p.circles[v])) {
                    (Ok(ru), Ok(rv)) => {
                        let m = ru.compose(&rv);
                        (m.trace().norm(), m.apply(origin).chordal(origin))
                    }
                    _ => (f64::NAN, f64::NAN),
                };
                Cusp {
                    edge: (u, v),
                    point: (z.re, z.im),
                    trace_abs,
                    fixed_residual,
                }
            })
            .collect()
    }

    /// Indices of the closed disks containing `z`, within tolerance.
    pub fn containing_disks(&self, z: SpherePoint<f64>) -> Vec<usize> {
        let Some(z) = z.to_finite() else {
            return (0..self.generators())
                .filter(|&j| self.packing.circles[j].orientation() < 0)
                .collect();
        };
        (0..self.generators())
            .filter(|&j| self.packing.circles[j].signed_distance(z) <= self.tol)
            .collect()
    }

    /// The Nielsen map: reflect in the circle whose closed disk contains `z`,
    /// taking the lowest index at cusps.
    pub fn nielsen_step(&self, z: SpherePoint<f64>) -> Result<NielsenStep, GroupError> {
        let hits = self.containing_disks(z);
        let Some(&index) = hits.first() else {
            return Err(GroupError::OutsideDomain);
        };
        Ok(NielsenStep {
            point: self.reflections[index].apply(z).normalized(),
            index,
            tie: hits.len() > 1,
        })
    }

    /// First `steps` symbols of the Nielsen itinerary of `z`. At a cusp the
    /// lowest index different from the previous symbol is used, so a cusp
    /// point alternates between its two circles.
    pub fn nielsen_itinerary(&self, z: SpherePoint<f64>, steps: usize) -> Result<Vec<usize>, GroupError> {
        let mut out = Vec::with_capacity(steps);
        let mut z = z;
        for k in 0..steps {
            let hits = self.containing_disks(z);
            if hits.is_empty() {
                return Err(if k == 0 {
                    GroupError::OutsideDomain
                } else {
                    GroupError::EscapedToOmega(k)
                });
            }
            let prev = out.last().copied();
            let j = hits.iter().copied().find(|&j| Some(j) != prev).unwrap_or(hits[0]);
            out.push(j);
            z = self.reflections[j].apply(z).normalized();
        }
        Ok(out)
    }
}

/// Rescales the matrix so its largest entry has modulus one. Long words
/// lose the determinant to cancellation, so it is not used here.
pub(crate) fn normalized(g: Isometry<f64>) -> Isometry<f64> {
    let scale = |m: Mobius<f64>| {
        let s = [m.a, m.b, m.c, m.d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if s > 0.0 && s.is_finite() {
            Mobius::new(m.a / s, m.b / s, m.c / s, m.d / s)
        } else {
            m
        }
    };
    match g {
        Isometry::Direct(m) => Isometry::Direct(scale(m)),
        Isometry::Reversing(r) => Isometry::Reversing(AntiMobius::new(scale(r.m))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::regular_polygon_packing;
    use num_complex::Complex64 as C;

    fn g2() -> KissingGroup {
        KissingGroup::new(&regular_polygon_packing(2).unwrap()).unwrap()
    }

    #[test]
    fn reflection_examples() {
        let r = reflection(&Circle::new(C::new(2.0, 0.0), 3f64.sqrt())).unwrap();
        let z = C::new(2.0 + 3f64.sqrt(), 0.0);
        assert!((r.apply_finite(z).to_finite().unwrap() - z).norm() < 1e-12);
        let u = reflection(&Circle::unit()).unwrap();
        let w = C::new(0.3, 0.4);
        let expect = C::new(1.0, 0.0) / w.conj();
        assert!((u.apply_finite(w).to_finite().unwrap() - expect).norm() < 1e-12);
        let bad = Circle::from_form(1.0, C::new(0.0, 0.0), 1.0);
        assert_eq!(reflection(&bad).unwrap_err(), GroupError::DegenerateCircle);
    }

    #[test]
    fn words_must_be_reduced() {
        assert_eq!(Word::new(vec![0, 1, 1]), Err(GroupError::WordNotReduced(2)));
        assert!(Word::new(vec![0, 1, 0]).is_ok());
    }

    #[test]
    fn apply_composes_left_to_right() {
        let g = g2();
        let z = SpherePoint::finite(C::new(0.1, 0.2));
        let two = g.apply_point(&Word::new(vec![0, 1]).unwrap(), z).unwrap();
        let one = g.apply_point(&Word::new(vec![1]).unwrap(), z).unwrap();
        let step = g.apply_point(&Word::new(vec![0]).unwrap(), one).unwrap();
        assert!(two.chordal(step) < 1e-12);
        assert!(g.apply_point(&Word::empty(), z).unwrap().chordal(z) < 1e-15);
    }

    #[test]
    fn reflected_disk_is_inside() {
        let g = g2();
        let c = g.apply_circle(&Word::new(vec![0]).unwrap(), &g.packing.circles[1]).unwrap();
        let d0 = g.packing.circles[0];
        assert!(c.orientation() > 0);
        assert!((c.center() - d0.center()).norm() + c.radius() <= d0.radius() + 1e-12);
    }

    #[test]
    fn cusps_of_triangle_packing() {
        let g = g2();
        let cusps = g.cusp_points();
        assert_eq!(cusps.len(), 3);
        for c in &cusps {
            let z = C::new(c.point.0, c.point.1);
            assert!((z.norm() - 1.0).abs() < 1e-12);
            let k = (z.arg() / (std::f64::consts::TAU / 3.0)).rem_euclid(3.0);
            assert!((k - k.round()).abs() < 1e-12);
            assert!((c.trace_abs - 2.0).abs() < 1e-9);
            assert!(c.fixed_residual < 1e-12);
        }
    }

    #[test]
    fn nielsen_examples() {
        let g = g2();
        let c0 = g.packing.circles[0].center();
        let s = g.nielsen_step(SpherePoint::finite(c0)).unwrap();
        assert_eq!(s.index, 0);
        assert!(s.point.is_infinite());
        assert_eq!(
            g.nielsen_step(SpherePoint::finite(C::new(0.0, 0.0))),
            Err(GroupError::OutsideDomain)
        );
        let cusp = SpherePoint::finite(C::from_polar(1.0, std::f64::consts::TAU / 3.0));
        let s = g.nielsen_step(cusp).unwrap();
        assert!(s.tie);
        assert!(s.point.chordal(cusp) < 1e-12);
        let it = g.nielsen_itinerary(cusp, 6).unwrap();
        assert_eq!(it, vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn loxodromic_fixed_point_itinerary() {
        // opposite circles of the square packing are disjoint
        let g = KissingGroup::new(&regular_polygon_packing(3).unwrap()).unwrap();
        let m = g.reflections[0].compose(&g.reflections[2]).normalized();
        // fixed points of z -> (az + b)/(cz + d)
        let (a, b, c, d) = (m.a, m.b, m.c, m.d);
        let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
        let roots = [(a - d + disc) / (2.0 * c), (a - d - disc) / (2.0 * c)];
        // attracting fixed point has |c z + d| > 1
        let z = if (c * roots[0] + d).norm() > (c * roots[1] + d).norm() { roots[0] } else { roots[1] };
        let it = g.nielsen_itinerary(SpherePoint::finite(z), 8).unwrap();
        assert_eq!(it, vec![0, 2, 0, 2, 0, 2, 0, 2]);
    }
}
