//! Angle dynamics of `θ ↦ −dθ` on the circle, with exact rational angles.

mod lamination;
mod qmark;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AngleError;

pub use lamination::{lamination_of, Lamination, LaminationDocument, Leaf};
pub use qmark::{question_mark, DEFAULT_QMARK_DEPTH};

/// A rational angle in `[0, 1)`, measured in turns.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(BigRational);

impl Angle {
    pub fn new(num: i64, den: i64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::BadAngle(format!("{num}/0")));
        }
        Ok(Self::from_ratio(BigRational::new(num.into(), den.into())))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    /// Reduces any rational mod 1.
    pub fn from_ratio(r: BigRational) -> Self {
        let f = &r - r.floor();
        Self(f)
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// `−θ` mod 1.
    pub fn neg(&self) -> Self {
        Self::from_ratio(-self.0.clone())
    }

    /// `θ + k/m` mod 1.
    pub fn shift(&self, k: i64, m: usize) -> Self {
        Self::from_ratio(&self.0 + BigRational::new(k.into(), BigInt::from(m)))
    }

    /// Index `j` of the open arc `(j/m, (j+1)/m)` containing the angle, or
    /// `Err(j)` if the angle equals `j/m`.
    pub fn arc_index(&self, m: usize) -> Result<usize, usize> {
        let scaled = &self.0 * BigInt::from(m);
        let j = scaled.floor().to_integer().to_usize().unwrap_or(0);
        if scaled.is_integer() {
            Err(j)
        } else {
            Ok(j)
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AngleError::BadAngle(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        let r = BigRational::new(p, q);
        if r.is_negative() || r >= BigRational::one() {
            return Err(bad());
        }
        Ok(Self(r))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_degree(d: usize) -> Result<(), AngleError> {
    if d < 2 {
        Err(AngleError::DegreeTooSmall(d))
    } else {
        Ok(())
    }
}

/// `−dθ` mod 1.
pub fn angle_map(theta: &Angle, d: usize) -> Angle {
    Angle::from_ratio(-(theta.ratio() * BigInt::from(d)))
}

/// The `d + 1` solutions `j/(d+1)` of `−dθ ≡ θ`.
pub fn fixed_angles(d: usize) -> Result<Vec<Angle>, AngleError> {
    check_degree(d)?;
    Ok((0..=d).map(|j| Angle::zero().shift(j as i64, d + 1)).collect())
}

/// All unordered 2-cycles `{θ, −dθ}`, sorted by their smaller angle.
pub fn two_cycles(d: usize) -> Result<Vec<Leaf>, AngleError> {
    check_degree(d)?;
    let m = d * d - 1;
    let mut out = Vec::new();
    for k in 0..m {
        let t = Angle::zero().shift(k as i64, m);
        let image = angle_map(&t, d);
        if t < image && angle_map(&image, d) == t {
            out.push(Leaf::new(t, image));
        }
    }
    Ok(out)
}

/// Symbols of an orbit with respect to the arcs `A_j = (j/(d+1), (j+1)/(d+1))`,
/// stopping early if an iterate lands on a partition point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Itinerary {
    pub symbols: Vec<usize>,
    /// `(step, j)` when the iterate at `step` equals `j/(d+1)`.
    pub boundary_hit: Option<(usize, usize)>,
}

pub fn itinerary(theta: &Angle, d: usize, steps: usize) -> Result<Itinerary, AngleError> {
    check_degree(d)?;
    let mut symbols = Vec::with_capacity(steps);
    let mut t = theta.clone();
    for step in 0..steps {
        match t.arc_index(d + 1) {
            Ok(j) => symbols.push(j),
            Err(j) => {
                return Ok(Itinerary {
                    symbols,
                    boundary_hit: Some((step, j)),
                })
            }
        }
        t = angle_map(&t, d);
    }
    Ok(Itinerary {
        symbols,
        boundary_hit: None,
    })
}

/// First `steps` symbols, failing with `BoundaryHit` if an iterate lands on
/// a partition point.
pub fn angle_itinerary(theta: &Angle, d: usize, steps: usize) -> Result<Vec<usize>, AngleError> {
    let it = itinerary(theta, d, steps)?;
    match it.boundary_hit {
        Some((step, index)) => Err(AngleError::BoundaryHit { step, index }),
        None => Ok(it.symbols),
    }
}

/// The 2-cycle `{θ, −dθ}` with `θ ∈ A_i` and `−dθ ∈ A_j`.
pub fn leaf_for_chord(d: usize, i: usize, j: usize) -> Result<Leaf, AngleError> {
    check_degree(d)?;
    let (i, j) = (i.min(j), i.max(j));
    if j > d {
        return Err(AngleError::NotFound(i, j));
    }
    if j == i + 1 || (i == 0 && j == d) || i == j {
        return Err(AngleError::AdjacentVertices(i, j));
    }
    let m = d * d - 1;
    // θ ∈ A_i means k/m ∈ (i/(d+1), (i+1)/(d+1)), i.e. k ∈ ((d-1)i, (d-1)(i+1))
    for k in (d - 1) * i + 1..(d - 1) * (i + 1) {
        let t = Angle::zero().shift(k as i64, m);
        let image = angle_map(&t, d);
        if image.arc_index(d + 1) == Ok(j) {
            return Ok(Leaf::new(t, image));
        }
    }
    Err(AngleError::NotFound(i, j))
}
