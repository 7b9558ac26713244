//! Roots of homogeneous polynomials on the Riemann sphere.
//!
//! Polynomials are evaluated through a callback, so compositions never need
//! to be expanded into (badly scaled) coefficients. Roots are found by
//! Aberth iteration in a randomly rotated chart, which keeps roots away
//! from the chart's point at infinity.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use rand::Rng;

use crate::geometry::SpherePoint;
use crate::scalar::Real;

/// A value together with its derivative along one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub v: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Jet<T> {
    pub fn new(v: Complex<T>, d: Complex<T>) -> Self {
        Self { v, d }
    }

    pub fn constant(v: Complex<T>) -> Self {
        Self::new(v, Complex::new(T::zero(), T::zero()))
    }

    pub fn scale(self, c: Complex<T>) -> Self {
        Self::new(self.v * c, self.d * c)
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v + o.v, self.d + o.d)
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v - o.v, self.d - o.d)
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.v * o.v, self.v * o.d + self.d * o.v)
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.d)
    }
}

/// A homogeneous polynomial in `(x, y)`.
pub trait Homogeneous<T: Real> {
    fn degree(&self) -> usize;

    /// The value at `(x, y)` together with a scale for it: the normwise bound
    /// `Σ |c_j| ‖(x, y)‖^D`, under the same scaling as the value.
    fn eval(&self, x: Jet<T>, y: Jet<T>) -> (Jet<T>, T);
}

/// `Σ c_j x^j y^(D−j)` for an explicit coefficient list of length `D + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientForm<T> {
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> CoefficientForm<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Self { coeffs }
    }

    /// Plain (non-jet) evaluation.
    pub fn at(&self, x: Complex<T>, y: Complex<T>) -> Complex<T> {
        self.eval(Jet::constant(x), Jet::constant(y)).0.v
    }

    /// `Σ |c_j| x^j y^(D−j)` for non-negative `x`, `y`.
    pub fn abs_at(&self, x: T, y: T) -> T {
        self.abs_homogeneous(x, y)
    }

    fn norm_bound(&self, x: Complex<T>, y: Complex<T>) -> T {
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let total = self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm());
        total * r.powi(self.degree() as i32)
    }

    fn abs_homogeneous(&self, x: T, y: T) -> T {
        let n = self.coeffs.len();
        if n == 0 {
            return T::zero();
        }
        let deg = n - 1;
        let mut acc = T::zero();
        let mut xp = T::one();
        for (j, c) in self.coeffs.iter().enumerate() {
            acc = acc + c.norm() * xp * y.powi((deg - j) as i32);
            xp = xp * x;
        }
        acc
    }
}

impl<T: Real> Homogeneous<T> for CoefficientForm<T> {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn eval(&self, x: Jet<T>, y: Jet<T>) -> (Jet<T>, T) {
        let deg = self.degree();
        // Horner in x/y is unstable near y = 0; use the larger coordinate
        if x.v.norm() <= y.v.norm() {
            // y^D Σ c_j t^j, t = x / y
            let mut acc = Jet::constant(Complex::new(T::zero(), T::zero()));
            let mut ypow = Jet::constant(Complex::new(T::one(), T::zero()));
            let mut terms = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                terms.push(ypow);
                ypow = ypow * y;
            }
            let mut xpow = Jet::constant(Complex::new(T::one(), T::zero()));
            for (j, c) in self.coeffs.iter().enumerate() {
                acc = acc + (xpow * terms[deg - j]).scale(*c);
                xpow = xpow * x;
            }
            (acc, self.norm_bound(x.v, y.v))
        } else {
            let mut acc = Jet::constant(Complex::new(T::zero(), T::zero()));
            let mut xpow = Jet::constant(Complex::new(T::one(), T::zero()));
            let mut terms = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                terms.push(xpow);
                xpow = xpow * x;
            }
            let mut ypow = Jet::constant(Complex::new(T::one(), T::zero()));
            for (j, c) in self.coeffs.iter().enumerate().rev() {
                acc = acc + (ypow * terms[j]).scale(*c);
                ypow = ypow * y;
            }
            (acc, self.norm_bound(x.v, y.v))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions<T> {
    pub max_iters: usize,
    pub restarts: usize,
    /// Largest normwise backward error `|F| / bound` accepted at a root.
    pub residual_tol: T,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self {
            max_iters: 4000,
            restarts: 8,
            residual_tol: T::lit(1e-8),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T> {
    pub roots: Vec<SpherePoint<T>>,
    /// Normwise backward error `|F| / bound` at each root.
    pub residuals: Vec<T>,
    pub iterations: usize,
}

/// A unitary change of coordinates `(x, y) = U (u, v)`.
#[derive(Debug, Clone, Copy)]
struct Rotation<T> {
    alpha: Complex<T>,
    beta: Complex<T>,
}

impl<T: Real> Rotation<T> {
    fn random<R: Rng>(rng: &mut R) -> Self {
        // uniform on the unit 3-sphere
        let g = |rng: &mut R| -> T {
            let u1: f64 = rng.random::<f64>().max(1e-300);
            let u2: f64 = rng.random();
            T::lit((-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos())
        };
        let (a, b, c, d) = (g(rng), g(rng), g(rng), g(rng));
        let n = (a * a + b * b + c * c + d * d).sqrt();
        Self {
            alpha: Complex::new(a / n, b / n),
            beta: Complex::new(c / n, d / n),
        }
    }

    /// Chart point `u` mapped to normalized `(x, y)` jets with derivative in `u`.
    fn lift(&self, u: Complex<T>) -> (Jet<T>, Jet<T>) {
        let s = (T::one() + u.norm_sqr()).sqrt();
        let inv = Complex::new(T::one() / s, T::zero());
        let one = Complex::new(T::one(), T::zero());
        // (x, y) = (α u − β̄, β u + ᾱ) / s
        let x = Jet::new((self.alpha * u - self.beta.conj()) * inv, self.alpha * inv);
        let y = Jet::new((self.beta * u + self.alpha.conj() * one) * inv, self.beta * inv);
        (x, y)
    }

    fn to_sphere(&self, u: Complex<T>) -> SpherePoint<T> {
        let (x, y) = self.lift(u);
        SpherePoint { x: x.v, y: y.v }.normalized()
    }
}

fn relative_residual<T: Real, F: Homogeneous<T> + ?Sized>(f: &F, x: Jet<T>, y: Jet<T>) -> T {
    let (val, bound) = f.eval(x, y);
    if bound > T::zero() {
        val.v.norm() / bound
    } else {
        val.v.norm()
    }
}

/// All `degree()` roots of `f` on the sphere, with multiplicity.
pub fn projective_roots<T: Real, F: Homogeneous<T> + ?Sized, R: Rng>(
    f: &F,
    rng: &mut R,
    opts: &RootOptions<T>,
) -> Result<RootSet<T>, String> {
    let n = f.degree();
    if n == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
        });
    }
    let mut last_err = String::new();
    for _ in 0..=opts.restarts {
        let rot = Rotation::random(rng);
        let offset: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let mut z: Vec<Complex<T>> = (0..n)
            .map(|k| {
                let r: f64 = 0.9 + 0.2 * rng.random::<f64>();
                let t = offset + std::f64::consts::TAU * (k as f64 + 0.25) / n as f64;
                Complex::new(T::lit(r * t.cos()), T::lit(r * t.sin()))
            })
            .collect();
        let eps = T::epsilon() * T::lit(8.0);
        let mut iterations = 0;
        for it in 0..opts.max_iters {
            iterations = it + 1;
            let mut moving = false;
            for i in 0..n {
                let (x, y) = rot.lift(z[i]);
                let (val, _) = f.eval(x, y);
                if val.v.norm() == T::zero() {
                    continue;
                }
                let newton = val.v / val.d;
                let mut s = Complex::new(T::zero(), T::zero());
                for j in 0..n {
                    if j != i {
                        s = s + Complex::new(T::one(), T::zero()) / (z[i] - z[j]);
                    }
                }
                let mut w = newton / (Complex::new(T::one(), T::zero()) - newton * s);
                if !(w.re.is_finite() && w.im.is_finite()) {
                    w = Complex::new(T::lit(1e-3), T::lit(1e-3));
                }
                z[i] = z[i] - w;
                if w.norm() > eps * (T::one() + z[i].norm()) {
                    moving = true;
                }
            }
            if !moving {
                break;
            }
        }
        let residuals: Vec<T> = z
            .iter()
            .map(|&u| {
                let (x, y) = rot.lift(u);
                relative_residual(f, x, y)
            })
            .collect();
        let worst = residuals.iter().copied().fold(T::zero(), T::max);
        if worst <= opts.residual_tol && z.iter().all(|u| u.re.is_finite() && u.im.is_finite()) {
            return Ok(RootSet {
                roots: z.iter().map(|&u| rot.to_sphere(u)).collect(),
                residuals,
                iterations,
            });
        }
        last_err = format!("worst relative residual {worst:?} after {iterations} iterations");
    }
    Err(last_err)
}

/// Point of the unit sphere in `R^3` for a point of the Riemann sphere.
pub fn to_r3<T: Real>(p: SpherePoint<T>) -> [T; 3] {
    let p = p.normalized();
    let two = T::lit(2.0);
    let xy = p.x * p.y.conj();
    [two * xy.re, two * xy.im, p.x.norm_sqr() - p.y.norm_sqr()]
}

pub fn from_r3<T: Real>(v: [T; 3]) -> SpherePoint<T> {
    // inverse stereographic projection with the pole at (0, 0, 1) ↔ ∞
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let [a, b, c] = [v[0] / n, v[1] / n, v[2] / n];
    if c > T::zero() {
        // near ∞: use w = 1/z = (a − ib) / (1 + c)
        let w = Complex::new(a, -b) / (T::one() + c);
        SpherePoint {
            x: Complex::new(T::one(), T::zero()),
            y: w,
        }
        .normalized()
    } else {
        SpherePoint::finite(Complex::new(a, b) / (T::one() - c)).normalized()
    }
}

/// Groups points whose chordal distance is at most `radius` (single
/// linkage). Each cluster is reported by its spherical mean and size.
pub fn cluster<T: Real>(points: &[SpherePoint<T>], radius: T) -> Vec<(SpherePoint<T>, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i].chordal(points[j]) <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, [T; 3], usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let v = to_r3(points[i]);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                for k in 0..3 {
                    g.1[k] = g.1[k] + v[k];
                }
                g.2 += 1;
            }
            None => groups.push((r, v, 1)),
        }
    }
    groups.into_iter().map(|(_, v, m)| (from_r3(v), m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    type C = Complex<f64>;

    fn poly_from_roots(roots: &[C]) -> Vec<C> {
        let mut c = vec![C::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![C::new(0.0, 0.0); c.len() + 1];
            for (j, &a) in c.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= a * r;
            }
            c = next;
        }
        c
    }

    #[test]
    fn recovers_known_roots() {
        let roots = [C::new(1.0, 0.0), C::new(-2.0, 0.5), C::new(0.0, 3.0), C::new(0.25, -0.25)];
        let f = CoefficientForm::new(poly_from_roots(&roots));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let found = projective_roots(&f, &mut rng, &RootOptions::default()).unwrap();
        for r in roots {
            let best = found
                .roots
                .iter()
                .map(|p| p.chordal(SpherePoint::finite(r)))
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12);
        }
    }

    #[test]
    fn degree_drop_gives_roots_at_infinity() {
        // z (z − 1) as a form of degree 4: two roots at ∞
        let f = CoefficientForm::new(vec![C::new(0.0, 0.0), C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let found = projective_roots(&f, &mut rng, &RootOptions::default()).unwrap();
        let clusters = cluster(&found.roots, 1e-4);
        assert_eq!(clusters.len(), 3);
        let inf = clusters.iter().find(|c| c.0.is_infinite()).unwrap();
        assert_eq!(inf.1, 2);
    }

    #[test]
    fn oracle_against_companion_matrix() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for deg in [3usize, 7, 12, 20] {
            let coeffs: Vec<C> = (0..=deg)
                .map(|_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let f = CoefficientForm::new(coeffs.clone());
            let found = projective_roots(&f, &mut rng, &RootOptions::default()).unwrap();
            // companion matrix of the monic polynomial
            let lead = coeffs[deg];
            let m = nalgebra::DMatrix::<C>::from_fn(deg, deg, |i, j| {
                if j == deg - 1 {
                    -coeffs[i] / lead
                } else if i == j + 1 {
                    C::new(1.0, 0.0)
                } else {
                    C::new(0.0, 0.0)
                }
            });
            let eig = m.eigenvalues_complex_oracle();
            for e in eig {
                let best = found
                    .roots
                    .iter()
                    .map(|p| p.chordal(SpherePoint::finite(e)))
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-8, "degree {deg}");
            }
        }
    }

    trait Eigen {
        fn eigenvalues_complex_oracle(&self) -> Vec<C>;
    }

    impl Eigen for nalgebra::DMatrix<C> {
        fn eigenvalues_complex_oracle(&self) -> Vec<C> {
            self.clone().schur().eigenvalues().expect("triangular Schur form").iter().copied().collect()
        }
    }

    #[test]
    fn r3_round_trip() {
        for z in [C::new(0.3, -2.0), C::new(0.0, 0.0), C::new(1e6, 1.0)] {
            let p = SpherePoint::finite(z);
            assert!(from_r3(to_r3(p)).chordal(p) < 1e-12);
        }
        let inf = SpherePoint::<f64>::infinity();
        assert!(from_r3(to_r3(inf)).is_infinite());
    }
}
