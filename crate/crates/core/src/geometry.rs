//! Points of the Riemann sphere, generalized circles and (anti-)Möbius maps.
//!
//! Circles are stored as Hermitian forms `A|z|^2 + 2 Re(conj(B) z) + D`; the
//! associated disk is the side where the form is negative, so the sign of the
//! form carries the orientation. Möbius maps are 2x2 complex matrices acting
//! on homogeneous coordinates, which lets infinity be handled without special
//! cases.

use num_complex::Complex;

use crate::scalar::Real;

/// A point of the Riemann sphere in homogeneous coordinates `[x : y]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
}

impl<T: Real> SpherePoint<T> {
    pub fn finite(z: Complex<T>) -> Self {
        Self {
            x: z,
            y: Complex::new(T::one(), T::zero()),
        }
    }

    pub fn infinity() -> Self {
        Self {
            x: Complex::new(T::one(), T::zero()),
            y: Complex::new(T::zero(), T::zero()),
        }
    }

    /// Rescales the coordinates so that `|x|^2 + |y|^2 = 1`.
    pub fn normalized(self) -> Self {
        let n = (self.x.norm_sqr() + self.y.norm_sqr()).sqrt();
        if n == T::zero() || !n.is_finite() {
            return self;
        }
        Self {
            x: self.x / n,
            y: self.y / n,
        }
    }

    /// The affine coordinate, or `None` when the point is (numerically) infinity.
    pub fn to_finite(self) -> Option<Complex<T>> {
        let p = self.normalized();
        if p.y.norm() <= T::epsilon() * T::lit(16.0) {
            None
        } else {
            Some(p.x / p.y)
        }
    }

    pub fn is_infinite(self) -> bool {
        self.to_finite().is_none()
    }

    pub fn conj(self) -> Self {
        Self {
            x: self.x.conj(),
            y: self.y.conj(),
        }
    }

    /// Chordal distance `2|z-w| / sqrt((1+|z|^2)(1+|w|^2))`, extended to infinity.
    pub fn chordal(self, other: Self) -> T {
        let num = (self.x * other.y - other.x * self.y).norm();
        let den = (self.x.norm_sqr() + self.y.norm_sqr()).sqrt()
            * (other.x.norm_sqr() + other.y.norm_sqr()).sqrt();
        T::lit(2.0) * num / den
    }
}

/// Chordal distance between two finite points.
pub fn chordal_distance<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    SpherePoint::finite(z).chordal(SpherePoint::finite(w))
}

/// An oriented generalized circle `{z : A|z|^2 + 2 Re(conj(B) z) + D = 0}`.
///
/// The open disk bounded by the circle is the negative side of the form.
///
/// The discriminant `|B|^2 - AD` is kept alongside the coefficients: for a
/// small circle far from the origin it cancels almost completely when
/// recomputed, while every Möbius image preserves it exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle<T> {
    pub a: T,
    pub b: Complex<T>,
    pub d: T,
    disc: T,
}

impl<T: Real> Circle<T> {
    /// The circle with given center and radius whose disk is the bounded interior.
    pub fn new(center: Complex<T>, radius: T) -> Self {
        Self {
            a: T::one(),
            b: -center,
            d: center.norm_sqr() - radius * radius,
            disc: radius * radius,
        }
    }

    /// The circle of the form `A|z|^2 + 2 Re(conj(B) z) + D`.
    pub fn from_form(a: T, b: Complex<T>, d: T) -> Self {
        Self {
            a,
            b,
            d,
            disc: b.norm_sqr() - a * d,
        }
    }

    /// Unit circle; the disk is the open unit disk.
    pub fn unit() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), T::one())
    }

    /// Same circle, disk replaced by the complementary side.
    pub fn reversed(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            d: -self.d,
            disc: self.disc,
        }
    }

    /// `|B|^2 - AD`; positive for a real nondegenerate circle.
    pub fn discriminant(&self) -> T {
        self.disc
    }

    pub fn is_line(&self) -> bool {
        let scale = self.b.norm().max(self.d.abs()).max(T::min_positive_value());
        self.a.abs() <= T::epsilon() * scale
    }

    /// +1 when the disk is the bounded side, -1 when it is the unbounded side.
    pub fn orientation(&self) -> i8 {
        if self.a >= T::zero() {
            1
        } else {
            -1
        }
    }

    pub fn center(&self) -> Complex<T> {
        -self.b / self.a
    }

    pub fn radius(&self) -> T {
        self.discriminant().max(T::zero()).sqrt() / self.a.abs()
    }

    /// Evaluates the Hermitian form at a finite point.
    pub fn value(&self, z: Complex<T>) -> T {
        self.a * z.norm_sqr() + T::lit(2.0) * (self.b.conj() * z).re + self.d
    }

    /// Evaluates the form at a homogeneous point (scaled by `|y|^2`).
    pub fn value_at(&self, p: SpherePoint<T>) -> T {
        let p = p.normalized();
        self.a * p.x.norm_sqr()
            + T::lit(2.0) * (self.b.conj() * p.x * p.y.conj()).re
            + self.d * p.y.norm_sqr()
    }

    /// True when `z` lies in the open disk.
    pub fn contains(&self, z: Complex<T>) -> bool {
        self.value(z) < T::zero()
    }

    /// Scale-free signed distance of `z` to the circle, negative inside the disk.
    ///
    /// For a proper circle this is `(|z-c| - r)` with sign by orientation.
    pub fn signed_distance(&self, z: Complex<T>) -> T {
        if self.is_line() {
            return self.value(z) / (T::lit(2.0) * self.b.norm());
        }
        let s = (z - self.center()).norm() - self.radius();
        if self.a > T::zero() {
            s
        } else {
            -s
        }
    }

    /// Rescales the form so that `|B|^2 - AD = 1`, keeping orientation.
    pub fn normalized(self) -> Self {
        let s = self.discriminant().sqrt();
        Self {
            a: self.a / s,
            b: self.b / s,
            d: self.d / s,
            disc: T::one(),
        }
    }

    /// Complex conjugate circle (image under `z -> conj(z)`).
    pub fn conj(self) -> Self {
        Self {
            a: self.a,
            b: self.b.conj(),
            d: self.d,
            disc: self.disc,
        }
    }

    /// Oriented inversive distance. Equals 1 for circles tangent with disjoint
    /// disks, exceeds 1 for disjoint closed disks and is invariant under
    /// Möbius maps.
    pub fn inversive_distance(&self, other: &Self) -> T {
        if !self.is_line() && !other.is_line() {
            // through centers and radii, which stay accurate for small circles
            let (r1, r2) = (self.radius(), other.radius());
            let dist = (self.center() - other.center()).norm();
            let sum = r1 + r2;
            let sign = if (self.a > T::zero()) == (other.a > T::zero()) { T::one() } else { -T::one() };
            return sign * ((dist - sum) * (dist + sum) + T::lit(2.0) * r1 * r2) / (T::lit(2.0) * r1 * r2);
        }
        let num = self.a * other.d + other.a * self.d
            - T::lit(2.0) * (self.b * other.b.conj()).re;
        num / (T::lit(2.0) * (self.discriminant() * other.discriminant()).sqrt())
    }

    /// Spherical (chordal) diameter of the disk.
    pub fn spherical_diameter(&self) -> T {
        let two = T::lit(2.0);
        let m = (two * two * self.b.norm_sqr() + (self.a - self.d).powi(2)).sqrt();
        let h = (self.a + self.d) / m;
        if h >= T::zero() {
            two * (T::one() - h * h).max(T::zero()).sqrt()
        } else {
            two
        }
    }

    /// The point of the circle nearest (or at the given parameter angle).
    pub fn point_at(&self, angle: T) -> Complex<T> {
        self.center() + Complex::from_polar(self.radius(), angle)
    }
}

/// Möbius map `z -> (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mobius<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(one, zero, zero, one)
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    /// Rescales to determinant one.
    pub fn normalized(self) -> Self {
        let s = self.det().sqrt();
        Self::new(self.a / s, self.b / s, self.c / s, self.d / s)
    }

    /// Trace of the determinant-one representative (defined up to sign).
    pub fn trace(&self) -> Complex<T> {
        (self.a + self.d) / self.det().sqrt()
    }

    pub fn apply(&self, p: SpherePoint<T>) -> SpherePoint<T> {
        SpherePoint {
            x: self.a * p.x + self.b * p.y,
            y: self.c * p.x + self.d * p.y,
        }
        .normalized()
    }

    pub fn apply_finite(&self, z: Complex<T>) -> SpherePoint<T> {
        self.apply(SpherePoint::finite(z))
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// Matrix with conjugated entries (so that `conj ∘ M = M̄ ∘ conj`).
    pub fn conj(&self) -> Self {
        Self::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// Image of a circle, preserving orientation of the disk.
    pub fn apply_circle(&self, c: &Circle<T>) -> Circle<T> {
        // H' = N^* H N with N = M^{-1}, H = [[A, B], [conj B, D]]
        let n = self.inverse();
        let h00 = Complex::new(c.a, T::zero());
        let h01 = c.b;
        let h10 = c.b.conj();
        let h11 = Complex::new(c.d, T::zero());
        // H N
        let hn00 = h00 * n.a + h01 * n.c;
        let hn01 = h00 * n.b + h01 * n.d;
        let hn10 = h10 * n.a + h11 * n.c;
        let hn11 = h10 * n.b + h11 * n.d;
        // N^* (H N)
        let a = n.a.conj() * hn00 + n.c.conj() * hn10;
        let b = n.a.conj() * hn01 + n.c.conj() * hn11;
        let d = n.b.conj() * hn01 + n.d.conj() * hn11;
        let det = n.det().norm();
        // dividing by |det N| keeps scale tame without touching the sign;
        // the discriminant picks up |det N|^2 and is then divided back
        Circle {
            a: a.re / det,
            b: b / det,
            d: d.re / det,
            disc: c.disc,
        }
    }

    /// The unique Möbius map sending `z[i]` to `w[i]` for i = 0, 1, 2.
    ///
    /// Returns `None` when either triple has coincident points.
    pub fn from_three_points(z: [SpherePoint<T>; 3], w: [SpherePoint<T>; 3]) -> Option<Self> {
        let to_std = Self::to_zero_one_infinity(z)?;
        let from_std = Self::to_zero_one_infinity(w)?;
        Some(from_std.inverse().compose(&to_std).normalized())
    }

    /// Map sending the triple to 0, 1, infinity.
    fn to_zero_one_infinity(p: [SpherePoint<T>; 3]) -> Option<Self> {
        let tol = T::lit(1e-14);
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i].chordal(p[j]) < tol {
                    return None;
                }
            }
        }
        // z -> (z - z0)(z1 - z2) / ((z - z2)(z1 - z0)) in homogeneous form
        let [p0, p1, p2] = p;
        // (z - z0) ~ x*y0 - y*x0 ; (z - z2) ~ x*y2 - y*x2
        let k1 = p1.x * p2.y - p2.x * p1.y; // (z1 - z2) * y1 y2
        let k2 = p1.x * p0.y - p0.x * p1.y; // (z1 - z0) * y1 y0
        let m = Self::new(p0.y * k1, -p0.x * k1, p2.y * k2, -p2.x * k2);
        Some(m)
    }
}

/// Anti-Möbius map `z -> (a conj(z) + b) / (c conj(z) + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiMobius<T> {
    pub m: Mobius<T>,
}

impl<T: Real> AntiMobius<T> {
    pub fn new(m: Mobius<T>) -> Self {
        Self { m }
    }

    /// Reflection (inversion) in a nondegenerate generalized circle.
    pub fn reflection(c: &Circle<T>) -> Option<Self> {
        if !(c.discriminant() > T::zero()) {
            return None;
        }
        let a = Complex::new(c.a, T::zero());
        let d = Complex::new(c.d, T::zero());
        // determinant -disc, so dividing by i sqrt(disc) gives determinant one
        let s = Complex::new(T::zero(), c.discriminant().sqrt());
        let m = Mobius::new(-c.b / s, -d / s, a / s, c.b.conj() / s);
        Some(Self { m })
    }

    pub fn apply(&self, p: SpherePoint<T>) -> SpherePoint<T> {
        self.m.apply(p.conj())
    }

    pub fn apply_finite(&self, z: Complex<T>) -> SpherePoint<T> {
        self.apply(SpherePoint::finite(z))
    }

    pub fn apply_circle(&self, c: &Circle<T>) -> Circle<T> {
        self.m.apply_circle(&c.conj())
    }

    /// `self ∘ other`, an orientation preserving map.
    pub fn compose(&self, o: &Self) -> Mobius<T> {
        self.m.compose(&o.m.conj())
    }

    /// `self ∘ m`.
    pub fn compose_mobius(&self, o: &Mobius<T>) -> Self {
        Self::new(self.m.compose(&o.conj()))
    }

    /// `m ∘ self`.
    pub fn after_mobius(&self, o: &Mobius<T>) -> Self {
        Self::new(o.compose(&self.m))
    }
}

/// An element of the extended Möbius group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Isometry<T> {
    Direct(Mobius<T>),
    Reversing(AntiMobius<T>),
}

impl<T: Real> Isometry<T> {
    pub fn identity() -> Self {
        Isometry::Direct(Mobius::identity())
    }

    pub fn apply(&self, p: SpherePoint<T>) -> SpherePoint<T> {
        match self {
            Isometry::Direct(m) => m.apply(p),
            Isometry::Reversing(r) => r.apply(p),
        }
    }

    pub fn apply_circle(&self, c: &Circle<T>) -> Circle<T> {
        match self {
            Isometry::Direct(m) => m.apply_circle(c),
            Isometry::Reversing(r) => r.apply_circle(c),
        }
    }

    /// `self ∘ r` for a reflection `r`.
    pub fn then_reflect_first(&self, r: &AntiMobius<T>) -> Self {
        match self {
            Isometry::Direct(m) => Isometry::Reversing(r.after_mobius(m)),
            Isometry::Reversing(s) => Isometry::Direct(s.compose(r)),
        }
    }

    pub fn is_reversing(&self) -> bool {
        matches!(self, Isometry::Reversing(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn unit_reflection_is_inverse_conjugate() {
        let r = AntiMobius::reflection(&Circle::<f64>::unit()).unwrap();
        let z = c(0.3, 0.4);
        let w = r.apply_finite(z).to_finite().unwrap();
        let expect = C::new(1.0, 0.0) / z.conj();
        assert!((w - expect).norm() < 1e-14);
    }

    #[test]
    fn reflection_fixes_boundary_point() {
        let circle = Circle::new(c(2.0, 0.0), 3f64.sqrt());
        let r = AntiMobius::reflection(&circle).unwrap();
        let p = c(2.0 + 3f64.sqrt(), 0.0);
        let w = r.apply_finite(p).to_finite().unwrap();
        assert!((w - p).norm() < 1e-12);
    }

    #[test]
    fn reflection_is_involution() {
        let circle = Circle::new(c(-0.7, 1.3), 0.45);
        let r = AntiMobius::reflection(&circle).unwrap();
        let m = r.compose(&r).normalized();
        let id = Mobius::<f64>::identity();
        let sign = if (m.a - id.a).norm() < 1.0 { 1.0 } else { -1.0 };
        for (x, y) in [(m.a, id.a), (m.b, id.b), (m.c, id.c), (m.d, id.d)] {
            assert!((x * sign - y).norm() < 1e-12);
        }
    }

    #[test]
    fn reflection_swaps_sides_of_circle() {
        let circle = Circle::new(c(1.0, 1.0), 0.5);
        let r = AntiMobius::reflection(&circle).unwrap();
        let inside = c(1.1, 0.9);
        let out = r.apply_finite(inside).to_finite().unwrap();
        assert!(circle.contains(inside));
        assert!(!circle.contains(out));
    }

    #[test]
    fn circle_image_matches_point_images() {
        let m = Mobius::new(c(1.0, 0.5), c(0.2, -1.0), c(0.3, 0.1), c(1.0, 0.0));
        let circle = Circle::new(c(0.4, -0.2), 0.7);
        let image = m.apply_circle(&circle);
        for k in 0..12 {
            let z = circle.point_at(k as f64 * 0.5);
            let w = m.apply_finite(z).to_finite().unwrap();
            assert!(image.value(w).abs() < 1e-10 * (1.0 + w.norm_sqr()));
        }
        // the image of an interior point is in the image disk
        let w = m.apply_finite(c(0.4, -0.2)).to_finite().unwrap();
        assert!(image.contains(w));
    }

    #[test]
    fn inversive_distance_of_tangent_circles() {
        let a = Circle::new(c(0.0, 0.0), 1.0);
        let b = Circle::new(c(3.0, 0.0), 2.0);
        assert!((a.inversive_distance(&b) - 1.0).abs() < 1e-14);
        let outer = Circle::new(c(0.0, 0.0), 4.0).reversed();
        let inner = Circle::new(c(3.0, 0.0), 1.0);
        assert!((outer.inversive_distance(&inner) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spherical_diameter_closed_form() {
        let r = 0.3;
        let disk = Circle::new(c(0.0, 0.0), r);
        let direct = chordal_distance(c(r, 0.0), c(-r, 0.0));
        assert!((disk.spherical_diameter() - direct).abs() < 1e-14);
        let off = Circle::new(c(2.0, 1.0), 0.5);
        let u = off.center() / off.center().norm();
        let direct = chordal_distance(off.center() - u * 0.5, off.center() + u * 0.5);
        assert!((off.spherical_diameter() - direct).abs() < 1e-12);
        assert_eq!(Circle::<f64>::unit().reversed().spherical_diameter(), 2.0);
    }

    #[test]
    fn three_point_map() {
        let z = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)].map(SpherePoint::finite);
        let w = [c(2.0, 1.0), c(-1.0, 0.5), c(0.3, 0.3)].map(SpherePoint::finite);
        let m = Mobius::from_three_points(z, w).unwrap();
        for i in 0..3 {
            assert!(m.apply(z[i]).chordal(w[i]) < 1e-12);
        }
        let inf = [SpherePoint::infinity(), z[1], z[2]];
        let m = Mobius::from_three_points(inf, w).unwrap();
        assert!(m.apply(SpherePoint::infinity()).chordal(w[0]) < 1e-12);
        assert!(Mobius::from_three_points([z[0], z[0], z[1]], w).is_none());
    }

    #[test]
    fn works_in_single_precision() {
        let circle = Circle::<f32>::new(Complex::new(1.0, 0.0), 0.5);
        let r = AntiMobius::reflection(&circle).unwrap();
        let p = Complex::new(1.5f32, 0.0);
        let w = r.apply_finite(p).to_finite().unwrap();
        assert!((w - p).norm() < 1e-5);
    }
}
