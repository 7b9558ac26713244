//! Anti-rational maps `z ↦ P(z̄) / Q(z̄)`: critical and fixed point
//! portraits, basin rendering and the graph–map dictionary check.

use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::MapError;
use crate::geometry::SpherePoint;
use crate::graph::PlaneGraph;
use crate::poly::{cluster, projective_roots, CoefficientForm, Homogeneous, Jet, RootOptions};

type C = Complex64;

pub const DEFAULT_SEED: u64 = 0x6b69_7373;
/// Chordal radius used to merge numerically multiple roots.
pub const CLUSTER_RADIUS: f64 = 1e-4;
/// A critical point counts as fixed when `R(c)` is this close to `c`.
pub const CRITICAL_FIXED_TOL: f64 = 1e-6;
/// A root of `R∘R − id` is kept when `R(z)` is this close to `z`.
pub const FIXED_FILTER_TOL: f64 = 1e-7;
/// Band around `|λ| = 1` reported as neutral.
pub const NEUTRAL_BAND: f64 = 1e-6;
pub const COMMON_ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AntiRationalMap {
    pub name: Option<String>,
    num: CoefficientForm<f64>,
    den: CoefficientForm<f64>,
    degree: usize,
}

/// JSON form: coefficient lists in increasing degree, each `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDocument {
    pub num: Vec<[f64; 2]>,
    pub den: Vec<[f64; 2]>,
}

/// A point of the sphere as written to JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointRecord {
    pub re: f64,
    pub im: f64,
    pub infinite: bool,
}

impl From<SpherePoint<f64>> for PointRecord {
    fn from(p: SpherePoint<f64>) -> Self {
        match p.to_finite() {
            Some(z) => Self {
                re: z.re,
                im: z.im,
                infinite: false,
            },
            None => Self {
                re: 0.0,
                im: 0.0,
                infinite: true,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub point: PointRecord,
    #[serde(skip)]
    pub sphere: SpherePoint<f64>,
    pub local_degree: usize,
    pub fixed: bool,
    /// Chordal distance between the point and its image.
    pub fixed_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPortrait {
    pub degree: usize,
    pub points: Vec<CriticalPoint>,
    pub k: usize,
    /// `Σ (m_i − 1)`, which equals `2d − 2`.
    pub multiplicity_sum: usize,
    pub critically_fixed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedClass {
    Attracting,
    Repelling,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPoint {
    pub point: PointRecord,
    #[serde(skip)]
    pub sphere: SpherePoint<f64>,
    pub multiplier_abs: f64,
    pub class: FixedClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointPortrait {
    pub points: Vec<FixedPoint>,
    pub total: usize,
    pub repelling: usize,
    pub attracting: usize,
    /// Largest normwise backward error among the roots of `R∘R − id`.
    pub max_root_residual: f64,
}

/// Refines a root of multiplicity `mult` as a simple root of the
/// `(mult − 1)`-th derivative, in whichever affine chart keeps the point
/// inside the unit disk.
fn polish_multiple_root(f: &CoefficientForm<f64>, p: SpherePoint<f64>, mult: usize) -> SpherePoint<f64> {
    let p = p.normalized();
    let flip = p.x.norm() > p.y.norm();
    let mut c = f.coeffs.clone();
    if flip {
        c.reverse();
    }
    for _ in 1..mult {
        c = (1..c.len()).map(|j| c[j] * j as f64).collect();
    }
    let horner = |t: C| {
        let (mut v, mut dv) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        for &a in c.iter().rev() {
            dv = dv * t + v;
            v = v * t + a;
        }
        (v, dv)
    };
    let start = if flip { p.y / p.x } else { p.x / p.y };
    let mut t = start;
    for _ in 0..30 {
        let (v, dv) = horner(t);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        t -= step;
        if step.norm() <= 1e-16 * (1.0 + t.norm()) {
            break;
        }
    }
    // keep the cluster mean if Newton wandered off
    if !(t.re.is_finite() && t.im.is_finite()) || (t - start).norm() > CLUSTER_RADIUS * 10.0 {
        return p;
    }
    if flip {
        SpherePoint { x: C::new(1.0, 0.0), y: t }.normalized()
    } else {
        SpherePoint::finite(t).normalized()
    }
}

fn trim(mut v: Vec<C>) -> Vec<C> {
    while v.len() > 1 && v.last().is_some_and(|c| c.norm() == 0.0) {
        v.pop();
    }
    v
}

fn padded(mut v: Vec<C>, d: usize) -> Vec<C> {
    v.resize(d + 1, C::new(0.0, 0.0));
    v
}

/// `R∘R(z) − z` as a form of degree `d² + 1`, evaluated by composition.
struct SecondIterateFixedForm<'a> {
    map: &'a AntiRationalMap,
    num_bar: CoefficientForm<f64>,
    den_bar: CoefficientForm<f64>,
    scale: f64,
}

impl Homogeneous<f64> for SecondIterateFixedForm<'_> {
    fn degree(&self) -> usize {
        self.map.degree * self.map.degree + 1
    }

    fn eval(&self, x: Jet<f64>, y: Jet<f64>) -> (Jet<f64>, f64) {
        let (a, _) = self.num_bar.eval(x, y);
        let (b, _) = self.den_bar.eval(x, y);
        // homogeneity lets us rescale the inner pair by a constant
        let s = (a.v.norm_sqr() + b.v.norm_sqr()).sqrt().max(f64::MIN_POSITIVE);
        let inv = C::new(1.0 / s, 0.0);
        let (a, b) = (a.scale(inv), b.scale(inv));
        let (n, _) = self.map.num.eval(a, b);
        let (d, _) = self.map.den.eval(a, b);
        let r = (x.v.norm_sqr() + y.v.norm_sqr()).sqrt();
        (y * n - x * d, self.scale * r)
    }
}

impl AntiRationalMap {
    /// Coefficients in increasing degree. Fails if both are zero or they
    /// share a root.
    pub fn new(num: Vec<C>, den: Vec<C>) -> Result<Self, MapError> {
        let (num, den) = (trim(num), trim(den));
        if num.is_empty() || den.is_empty() {
            return Err(MapError::Invalid("empty coefficient list".into()));
        }
        if den.iter().all(|c| c.norm() == 0.0) || num.iter().all(|c| c.norm() == 0.0) {
            return Err(MapError::Invalid("numerator or denominator is zero".into()));
        }
        if num.iter().chain(&den).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(MapError::Invalid("non-finite coefficient".into()));
        }
        let degree = num.len().max(den.len()) - 1;
        if degree == 0 {
            return Err(MapError::Invalid("constant map".into()));
        }
        let map = Self {
            name: None,
            num: CoefficientForm::new(padded(num, degree)),
            den: CoefficientForm::new(padded(den, degree)),
            degree,
        };
        map.check_common_root()?;
        Ok(map)
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn from_document(doc: &MapDocument) -> Result<Self, MapError> {
        let conv = |v: &[[f64; 2]]| v.iter().map(|&[re, im]| C::new(re, im)).collect::<Vec<_>>();
        Self::new(conv(&doc.num), conv(&doc.den))
    }

    pub fn to_document(&self) -> MapDocument {
        let conv = |f: &CoefficientForm<f64>| trim(f.coeffs.clone()).iter().map(|c| [c.re, c.im]).collect();
        MapDocument {
            num: conv(&self.num),
            den: conv(&self.den),
        }
    }

    fn coefficient_scale(&self) -> f64 {
        self.num.coeffs.iter().chain(&self.den.coeffs).map(|c| c.norm()).sum()
    }

    fn check_common_root(&self) -> Result<(), MapError> {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let roots = projective_roots(&self.den, &mut rng, &RootOptions::default()).map_err(MapError::RootFindingFailure)?;
        let total: f64 = self.num.coeffs.iter().map(|c| c.norm()).sum();
        for r in roots.roots {
            let r = r.normalized();
            if self.num.at(r.x, r.y).norm() <= COMMON_ROOT_TOL * total {
                return Err(MapError::CommonRoot);
            }
        }
        Ok(())
    }

    /// `P(z̄) / Q(z̄)` on the sphere.
    pub fn eval(&self, z: SpherePoint<f64>) -> SpherePoint<f64> {
        let w = z.normalized().conj();
        SpherePoint {
            x: self.num.at(w.x, w.y),
            y: self.den.at(w.x, w.y),
        }
        .normalized()
    }

    pub fn eval_finite(&self, z: C) -> SpherePoint<f64> {
        self.eval(SpherePoint::finite(z))
    }

    /// `P′Q − PQ′` as a form of degree `2d − 2`.
    fn wronskian(&self) -> CoefficientForm<f64> {
        let d = self.degree;
        let (p, q) = (&self.num.coeffs, &self.den.coeffs);
        let deriv = |c: &[C]| -> Vec<C> { (1..c.len()).map(|j| c[j] * j as f64).collect() };
        let (dp, dq) = (deriv(p), deriv(q));
        let mut w = vec![C::new(0.0, 0.0); 2 * d];
        for (i, a) in dp.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                w[i + j] += a * b;
            }
        }
        for (i, a) in p.iter().enumerate() {
            for (j, b) in dq.iter().enumerate() {
                w[i + j] -= a * b;
            }
        }
        // the x^(2d−1) terms cancel
        w.truncate(2 * d - 1);
        CoefficientForm::new(w)
    }

    /// Spherical derivative at `z`; at a fixed point this is `|λ|`.
    pub fn spherical_derivative(&self, z: SpherePoint<f64>) -> f64 {
        let w = z.normalized().conj();
        let num = self.wronskian().at(w.x, w.y).norm();
        let den = self.num.at(w.x, w.y).norm_sqr() + self.den.at(w.x, w.y).norm_sqr();
        num / den
    }

    pub fn critical_points(&self) -> Result<CriticalPortrait, MapError> {
        self.critical_points_seeded(DEFAULT_SEED)
    }

    pub fn critical_points_seeded(&self, seed: u64) -> Result<CriticalPortrait, MapError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = self.wronskian();
        let roots = projective_roots(&w, &mut rng, &RootOptions::default()).map_err(MapError::RootFindingFailure)?;
        // critical points of z ↦ f(z̄) are the conjugates of those of f
        let mut points: Vec<CriticalPoint> = cluster(&roots.roots, CLUSTER_RADIUS)
            .into_iter()
            .map(|(c, mult)| {
                let c = polish_multiple_root(&w, c, mult).conj();
                let fixed_residual = self.eval(c).chordal(c);
                CriticalPoint {
                    point: c.into(),
                    sphere: c,
                    local_degree: mult + 1,
                    fixed: fixed_residual <= CRITICAL_FIXED_TOL,
                    fixed_residual,
                }
            })
            .collect();
        sort_points(&mut points, |p| p.sphere);
        let multiplicity_sum = points.iter().map(|p| p.local_degree - 1).sum();
        Ok(CriticalPortrait {
            degree: self.degree,
            k: points.len(),
            critically_fixed: points.iter().all(|p| p.fixed),
            points,
            multiplicity_sum,
        })
    }

    /// Fixed points without checking the counts.
    pub fn fixed_points_raw(&self, seed: u64) -> Result<FixedPointPortrait, MapError> {
        let conj = |f: &CoefficientForm<f64>| CoefficientForm::new(f.coeffs.iter().map(|c| c.conj()).collect());
        let form = SecondIterateFixedForm {
            map: self,
            num_bar: conj(&self.num),
            den_bar: conj(&self.den),
            scale: self.coefficient_scale(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let roots = projective_roots(&form, &mut rng, &RootOptions::default()).map_err(MapError::RootFindingFailure)?;
        let max_root_residual = roots.residuals.iter().copied().fold(0.0, f64::max);
        let fixed: Vec<SpherePoint<f64>> = roots
            .roots
            .iter()
            .copied()
            .filter(|&z| self.eval(z).chordal(z) <= FIXED_FILTER_TOL)
            .collect();
        let mut points = Vec::new();
        for (z, _) in cluster(&fixed, 1e-6) {
            let lambda = self.spherical_derivative(z);
            if (lambda - 1.0).abs() <= NEUTRAL_BAND {
                return Err(MapError::NeutralDetected(lambda));
            }
            points.push(FixedPoint {
                point: z.into(),
                sphere: z,
                multiplier_abs: lambda,
                class: if lambda < 1.0 { FixedClass::Attracting } else { FixedClass::Repelling },
            });
        }
        sort_points(&mut points, |p| p.sphere);
        let repelling = points.iter().filter(|p| p.class == FixedClass::Repelling).count();
        Ok(FixedPointPortrait {
            total: points.len(),
            attracting: points.len() - repelling,
            repelling,
            points,
            max_root_residual,
        })
    }

    /// Fixed points, checked against `d + 2k − 1` in total and `d + k − 1`
    /// repelling when the map is critically fixed.
    pub fn fixed_points(&self) -> Result<FixedPointPortrait, MapError> {
        self.fixed_points_seeded(DEFAULT_SEED)
    }

    pub fn fixed_points_seeded(&self, seed: u64) -> Result<FixedPointPortrait, MapError> {
        let crit = self.critical_points_seeded(seed)?;
        let fp = self.fixed_points_raw(seed)?;
        if crit.critically_fixed {
            let (d, k) = (self.degree, crit.k);
            if fp.total != d + 2 * k - 1 {
                return Err(MapError::CountMismatch {
                    found: fp.total,
                    expected: d + 2 * k - 1,
                });
            }
            if fp.repelling != d + k - 1 {
                return Err(MapError::CountMismatch {
                    found: fp.repelling,
                    expected: d + k - 1,
                });
            }
        }
        Ok(fp)
    }
}

/// Deterministic order: finite points by real then imaginary part, ∞ last.
fn sort_points<P>(v: &mut [P], key: impl Fn(&P) -> SpherePoint<f64>) {
    v.sort_by(|a, b| {
        let (a, b) = (key(a).to_finite(), key(b).to_finite());
        match (a, b) {
            (Some(a), Some(b)) => {
                let r = |x: f64| (x * 1e9).round();
                r(a.re).total_cmp(&r(b.re)).then(r(a.im).total_cmp(&r(b.im)))
            }
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
    });
}

fn real_poly(c: &[f64]) -> Vec<C> {
    c.iter().map(|&x| C::new(x, 0.0)).collect()
}

pub const PLATONIC_NAMES: [&str; 5] = ["tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron"];

/// The critically fixed maps attached to the Platonic solids.
pub fn platonic_map(name: &str) -> Result<AntiRationalMap, MapError> {
    let mut num = [0.0; 20];
    let mut den = [0.0; 20];
    let d = match name {
        "tetrahedron" => {
            num[2] = 3.0;
            den[3] = 2.0;
            den[0] = 1.0;
            3
        }
        "octahedron" => {
            num[4] = 5.0;
            num[0] = 1.0;
            den[5] = 1.0;
            den[1] = 5.0;
            5
        }
        "cube" => {
            num[7] = 1.0;
            num[3] = 7.0;
            den[4] = 7.0;
            den[0] = 1.0;
            7
        }
        "icosahedron" => {
            num[10] = 11.0;
            num[5] = 66.0;
            num[0] = -1.0;
            den[11] = 1.0;
            den[6] = 66.0;
            den[1] = -11.0;
            11
        }
        "dodecahedron" => {
            num[19] = 1.0;
            num[14] = -171.0;
            num[9] = 247.0;
            num[4] = 57.0;
            den[15] = -57.0;
            den[10] = 247.0;
            den[5] = 171.0;
            den[0] = 1.0;
            19
        }
        _ => return Err(MapError::UnknownMap(name.to_string())),
    };
    Ok(AntiRationalMap::new(real_poly(&num[..=d]), real_poly(&den[..=d]))?.named(name))
}

pub fn platonic_maps() -> Vec<AntiRationalMap> {
    PLATONIC_NAMES.iter().map(|n| platonic_map(n).expect("built-in map")).collect()
}

/// Viewing rectangle in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self {
            xmin: -2.0,
            xmax: 2.0,
            ymin: -2.0,
            ymax: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinRaster {
    pub width: usize,
    pub height: usize,
    /// Index into `targets`, or `JULIA`.
    pub labels: Vec<u32>,
    pub iterations: Vec<u32>,
    pub targets: Vec<SpherePoint<f64>>,
}

impl BasinRaster {
    pub const JULIA: u32 = u32::MAX;

    pub fn label_at(&self, col: usize, row: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    pub fn julia_fraction(&self) -> f64 {
        self.labels.iter().filter(|&&l| l == Self::JULIA).count() as f64 / self.labels.len() as f64
    }

    pub fn distinct_basins(&self) -> usize {
        let mut seen = vec![false; self.targets.len()];
        for &l in &self.labels {
            if l != Self::JULIA {
                seen[l as usize] = true;
            }
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn to_image(&self) -> image::RgbImage {
        let palette: [[u8; 3]; 8] = [
            [230, 159, 0],
            [86, 180, 233],
            [0, 158, 115],
            [240, 228, 66],
            [0, 114, 178],
            [213, 94, 0],
            [204, 121, 167],
            [153, 153, 153],
        ];
        image::RgbImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            let i = y as usize * self.width + x as usize;
            let l = self.labels[i];
            if l == Self::JULIA {
                return image::Rgb([0, 0, 0]);
            }
            let base = palette[l as usize % palette.len()];
            // darken slowly with the escape time
            let shade = 1.0 / (1.0 + 0.08 * self.iterations[i] as f64);
            let f = 0.35 + 0.65 * shade;
            image::Rgb(base.map(|c| (c as f64 * f) as u8))
        })
    }

    pub fn save_png(&self, path: &Path) -> Result<(), image::ImageError> {
        self.to_image().save_with_format(path, image::ImageFormat::Png)
    }
}

/// Pixel centers of the window, row by row from the top.
pub fn pixel_point(w: &Window, width: usize, height: usize, col: usize, row: usize) -> C {
    C::new(
        w.xmin + (col as f64 + 0.5) / width as f64 * (w.xmax - w.xmin),
        w.ymax - (row as f64 + 0.5) / height as f64 * (w.ymax - w.ymin),
    )
}

/// Labels each pixel by the fixed critical point its orbit reaches within
/// chordal distance `1e-6`.
pub fn julia_render(map: &AntiRationalMap, window: &Window, width: usize, height: usize, max_iters: usize) -> Result<BasinRaster, MapError> {
    let crit = map.critical_points()?;
    let targets: Vec<SpherePoint<f64>> = crit.points.iter().filter(|p| p.fixed).map(|p| p.sphere).collect();
    let rows: Vec<(Vec<u32>, Vec<u32>)> = (0..height)
        .into_par_iter()
        .map(|row| {
            let mut labels = Vec::with_capacity(width);
            let mut iters = Vec::with_capacity(width);
            for col in 0..width {
                let mut z = SpherePoint::finite(pixel_point(window, width, height, col, row));
                let mut label = BasinRaster::JULIA;
                let mut used = max_iters as u32;
                'outer: for it in 0..=max_iters {
                    for (t, &c) in targets.iter().enumerate() {
                        if z.chordal(c) < 1e-6 {
                            label = t as u32;
                            used = it as u32;
                            break 'outer;
                        }
                    }
                    z = map.eval(z);
                }
                labels.push(label);
                iters.push(used);
            }
            (labels, iters)
        })
        .collect();
    let mut labels = Vec::with_capacity(width * height);
    let mut iterations = Vec::with_capacity(width * height);
    for (l, i) in rows {
        labels.extend(l);
        iterations.extend(i);
    }
    Ok(BasinRaster {
        width,
        height,
        labels,
        iterations,
        targets,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DictionaryItem {
    pub check: String,
    pub expected: Value,
    pub found: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DictionaryReport {
    pub map: Option<String>,
    pub items: Vec<DictionaryItem>,
    pub pass: bool,
}

/// Compares the critical and fixed point data of `map` with the faces and
/// edges of `g`.
pub fn verify_dictionary(g: &PlaneGraph, map: &AntiRationalMap) -> DictionaryReport {
    verify_dictionary_seeded(g, map, DEFAULT_SEED)
}

pub fn verify_dictionary_seeded(g: &PlaneGraph, map: &AntiRationalMap, seed: u64) -> DictionaryReport {
    let mut items = Vec::new();
    let mut push = |check: &str, expected: Value, found: Value| {
        let pass = expected == found;
        items.push(DictionaryItem {
            check: check.to_string(),
            expected,
            found,
            pass,
        });
    };
    let mut face_degrees: Vec<usize> = g.faces().iter().map(|f| f.len()).collect();
    face_degrees.sort_unstable();
    let graph_degree = face_degrees.iter().map(|&m| m - 2).sum::<usize>() / 2 + 1;
    push("degree", json!(graph_degree), json!(map.degree()));
    match map.critical_points_seeded(seed) {
        Ok(crit) => {
            push("critically_fixed", json!(true), json!(crit.critically_fixed));
            push("critical_points_vs_faces", json!(g.face_count()), json!(crit.k));
            let mut valences: Vec<usize> = crit.points.iter().map(|p| p.local_degree + 1).collect();
            valences.sort_unstable();
            push("local_degrees_vs_face_degrees", json!(face_degrees), json!(valences));
            push(
                "multiplicity_sum",
                json!(2 * map.degree() - 2),
                json!(crit.multiplicity_sum),
            );
        }
        Err(e) => push("critical_points", json!("ok"), json!(e.to_string())),
    }
    match map.fixed_points_raw(seed) {
        Ok(fp) => push("repelling_vs_edges", json!(g.edge_count()), json!(fp.repelling)),
        Err(e) => push("fixed_points", json!("ok"), json!(e.to_string())),
    }
    let pass = items.iter().all(|i| i.pass);
    DictionaryReport {
        map: map.name.clone(),
        items,
        pass,
    }
}
