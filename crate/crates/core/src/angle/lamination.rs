//! Finite invariant laminations generated by fixed angles and 2-cycles.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{angle_map, check_degree, fixed_angles, leaf_for_chord, Angle};
use crate::error::AngleError;
use crate::graph::{outer_chords, PlaneGraph};

/// A chord of the disk joining two distinct angles, stored in increasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leaf([Angle; 2]);

impl Leaf {
    pub fn new(a: Angle, b: Angle) -> Self {
        if a <= b {
            Self([a, b])
        } else {
            Self([b, a])
        }
    }

    pub fn angles(&self) -> &[Angle; 2] {
        &self.0
    }

    pub fn contains(&self, t: &Angle) -> bool {
        self.0[0] == *t || self.0[1] == *t
    }

    /// The chords cross in the open disk.
    pub fn links(&self, o: &Leaf) -> bool {
        let [a, b] = &self.0;
        let inside = |t: &Angle| a < t && t < b;
        let [c, e] = &o.0;
        if self.contains(c) || self.contains(e) {
            return false;
        }
        inside(c) != inside(e)
    }
}

impl fmt::Debug for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0[0], self.0[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lamination {
    pub degree: usize,
    pub leaves: BTreeSet<Leaf>,
    pub singletons: BTreeSet<Angle>,
}

/// JSON form with fractions written as strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaminationDocument {
    pub d: usize,
    pub leaves: Vec<[Angle; 2]>,
    pub singletons: Vec<Angle>,
}

impl Lamination {
    /// Validates unlinkedness and forward invariance.
    pub fn new(
        degree: usize,
        leaves: impl IntoIterator<Item = Leaf>,
        singletons: impl IntoIterator<Item = Angle>,
    ) -> Result<Self, AngleError> {
        check_degree(degree)?;
        let l = Self {
            degree,
            leaves: leaves.into_iter().collect(),
            singletons: singletons.into_iter().collect(),
        };
        l.validate()?;
        Ok(l)
    }

    pub fn empty(degree: usize) -> Result<Self, AngleError> {
        Self::new(degree, [], [])
    }

    pub fn validate(&self) -> Result<(), AngleError> {
        let leaves: Vec<&Leaf> = self.leaves.iter().collect();
        for (i, a) in leaves.iter().enumerate() {
            if a.0[0] == a.0[1] {
                return Err(AngleError::NonInvariantLamination(format!("degenerate leaf {a:?}")));
            }
            for b in &leaves[i + 1..] {
                if a.links(b) {
                    return Err(AngleError::LinkedLeaves(format!("{a:?} and {b:?}")));
                }
            }
        }
        let d = self.degree;
        for s in &self.singletons {
            let img = angle_map(s, d);
            if !self.singletons.contains(&img) {
                return Err(AngleError::NonInvariantLamination(format!("image {img} of {s} is not a singleton")));
            }
        }
        for leaf in &self.leaves {
            let (a, b) = (angle_map(&leaf.0[0], d), angle_map(&leaf.0[1], d));
            let ok = if a == b {
                self.singletons.contains(&a)
            } else {
                self.leaves.contains(&Leaf::new(a, b))
            };
            if !ok {
                return Err(AngleError::NonInvariantLamination(format!("image of {leaf:?}")));
            }
        }
        Ok(())
    }

    /// `θ ↦ −θ` applied to every angle.
    pub fn mirror(&self) -> Self {
        Self {
            degree: self.degree,
            leaves: self.leaves.iter().map(|l| Leaf::new(l.0[0].neg(), l.0[1].neg())).collect(),
            singletons: self.singletons.iter().map(Angle::neg).collect(),
        }
    }

    /// `θ ↦ θ + k/(d+1)`, which commutes with `θ ↦ −dθ`.
    pub fn rotate(&self, k: i64) -> Self {
        let m = self.degree + 1;
        Self {
            degree: self.degree,
            leaves: self
                .leaves
                .iter()
                .map(|l| Leaf::new(l.0[0].shift(k, m), l.0[1].shift(k, m)))
                .collect(),
            singletons: self.singletons.iter().map(|t| t.shift(k, m)).collect(),
        }
    }

    /// Every angle appearing in a leaf or singleton.
    pub fn angles(&self) -> BTreeSet<Angle> {
        let mut out = self.singletons.clone();
        for l in &self.leaves {
            out.extend(l.0.iter().cloned());
        }
        out
    }

    pub fn to_document(&self) -> LaminationDocument {
        LaminationDocument {
            d: self.degree,
            leaves: self.leaves.iter().map(|l| l.0.clone()).collect(),
            singletons: self.singletons.iter().cloned().collect(),
        }
    }

    pub fn from_document(doc: &LaminationDocument) -> Result<Self, AngleError> {
        Self::new(
            doc.d,
            doc.leaves.iter().map(|[a, b]| Leaf::new(a.clone(), b.clone())),
            doc.singletons.iter().cloned(),
        )
    }
}

/// Leaves for the chords of a marked outerplanar graph on `0..=d`, plus the
/// `d + 1` fixed angles.
pub fn lamination_of(g: &PlaneGraph) -> Result<Lamination, AngleError> {
    let (n, chords) = outer_chords(g)?;
    let d = n - 1;
    let leaves = chords
        .iter()
        .map(|&(i, j)| leaf_for_chord(d, i, j))
        .collect::<Result<Vec<_>, _>>()?;
    Lamination::new(d, leaves, fixed_angles(d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{outerplanar_from_chords, polygon_graph};

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn leaf(p: &str, q: &str) -> Leaf {
        Leaf::new(a(p), a(q))
    }

    #[test]
    fn square_with_chord() {
        let l = lamination_of(&outerplanar_from_chords(4, &[(0, 2)]).unwrap()).unwrap();
        assert_eq!(l.degree, 3);
        assert_eq!(l.leaves.iter().cloned().collect::<Vec<_>>(), vec![leaf("1/8", "5/8")]);
        let s: Vec<String> = l.singletons.iter().map(|t| t.to_string()).collect();
        assert_eq!(s, ["0/1", "1/4", "1/2", "3/4"]);
    }

    #[test]
    fn polygon_has_no_leaves() {
        for d in 2..8 {
            let l = lamination_of(&polygon_graph(d).unwrap()).unwrap();
            assert!(l.leaves.is_empty());
            assert_eq!(l.singletons.len(), d + 1);
        }
    }

    #[test]
    fn crossing_leaves_are_rejected() {
        let err = Lamination::new(3, [leaf("1/8", "5/8"), leaf("3/8", "7/8")], fixed_angles(3).unwrap());
        assert!(matches!(err, Err(AngleError::LinkedLeaves(_))));
        assert!(matches!(
            Lamination::new(3, [leaf("1/8", "1/4")], []),
            Err(AngleError::NonInvariantLamination(_))
        ));
    }

    #[test]
    fn mirror_examples() {
        let l = Lamination::new(3, [leaf("1/8", "5/8")], []).unwrap();
        let m = l.mirror();
        assert_eq!(m.leaves.iter().next().unwrap(), &leaf("7/8", "3/8"));
        assert_eq!(m.mirror(), l);
        let l2 = Lamination::new(3, [leaf("3/8", "7/8")], []).unwrap();
        assert_eq!(l2.mirror().leaves.iter().next().unwrap(), &leaf("5/8", "1/8"));
        assert!(m.validate().is_ok());
    }

    #[test]
    fn document_round_trip() {
        let l = lamination_of(&outerplanar_from_chords(6, &[(0, 2), (2, 5), (3, 5)]).unwrap()).unwrap();
        let json = serde_json::to_string(&l.to_document()).unwrap();
        let back: LaminationDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(Lamination::from_document(&back).unwrap(), l);
        assert!(json.starts_with("{\"d\":5,\"leaves\":[["));
    }
}
