//! Level disks `g D_j` and limit-set covers.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{normalized, KissingGroup, Word};
use crate::error::GroupError;
use crate::geometry::{Circle, Isometry};

/// Default cap on the number of disks held at once.
pub const DEFAULT_DISK_CAP: usize = 10_000_000;

#[derive(Debug, Clone)]
pub struct LevelDisk {
    /// `g`, a reduced word whose last letter differs from `vertex`.
    pub word: Word,
    pub vertex: usize,
    /// The disk `g D_vertex`.
    pub circle: Circle<f64>,
    element: Isometry<f64>,
}

impl LevelDisk {
    pub fn diameter(&self) -> f64 {
        self.circle.spherical_diameter()
    }
}

#[derive(Debug, Clone)]
pub struct DiskLevel {
    pub level: usize,
    pub disks: Vec<LevelDisk>,
    pub max_spherical_diameter: f64,
    /// Disks below the pruning threshold were dropped.
    pub pruned: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitCover {
    pub circles: Vec<(f64, f64, f64)>,
    pub words: Vec<Vec<usize>>,
    pub deepest_level: usize,
}

fn saturating_count(n: usize, l: usize) -> usize {
    let mut c = n;
    for _ in 0..l {
        c = c.saturating_mul(n.saturating_sub(1));
    }
    c
}

impl KissingGroup {
    fn base_disks(&self) -> Vec<LevelDisk> {
        (0..self.generators())
            .map(|j| LevelDisk {
                word: Word::empty(),
                vertex: j,
                circle: self.packing.circles[j],
                element: Isometry::identity(),
            })
            .collect()
    }

    /// The disks `g D_k` (k != j) inside the disk `g D_j`.
    pub fn children(&self, d: &LevelDisk) -> Vec<LevelDisk> {
        let j = d.vertex;
        let element = normalized(d.element.then_reflect_first(&self.reflections[j]));
        let word = d.word.push(j).expect("stored words end with a letter other than the vertex");
        (0..self.generators())
            .filter(|&k| k != j)
            .map(|k| LevelDisk {
                word: word.clone(),
                vertex: k,
                circle: element.apply_circle(&self.packing.circles[k]).normalized(),
                element,
            })
            .collect()
    }

    /// All level-`l` disks in word order, optionally dropping those whose
    /// spherical diameter is below `prune_below`.
    pub fn level_disks(&self, l: usize, prune_below: Option<f64>) -> Result<DiskLevel, GroupError> {
        self.level_disks_capped(l, prune_below, DEFAULT_DISK_CAP)
    }

    pub fn level_disks_capped(&self, l: usize, prune_below: Option<f64>, cap: usize) -> Result<DiskLevel, GroupError> {
        let n = self.generators();
        let full = saturating_count(n, l);
        if prune_below.is_none() && full > cap {
            return Err(GroupError::ExplosionGuard { count: full, cap });
        }
        let keep = |d: &LevelDisk| prune_below.is_none_or(|t| d.diameter() >= t);
        let mut disks: Vec<LevelDisk> = self.base_disks().into_iter().filter(keep).collect();
        for _ in 0..l {
            let next: Vec<LevelDisk> = disks
                .par_iter()
                .flat_map_iter(|d| self.children(d).into_iter().filter(keep))
                .collect();
            if next.len() > cap {
                return Err(GroupError::ExplosionGuard { count: next.len(), cap });
            }
            disks = next;
        }
        let max_spherical_diameter = disks.iter().map(|d| d.diameter()).fold(0.0, f64::max);
        Ok(DiskLevel {
            level: l,
            max_spherical_diameter,
            pruned: prune_below.is_some() && disks.len() < full,
            disks,
        })
    }

    /// Largest spherical diameter among level-`l` disks, found by best-first
    /// search: a disk is never larger than the disk containing it.
    pub fn max_diameter_at_level(&self, l: usize) -> f64 {
        struct Entry(f64, usize, LevelDisk);
        impl PartialEq for Entry {
            fn eq(&self, o: &Self) -> bool {
                self.cmp(o) == Ordering::Equal
            }
        }
        impl Eq for Entry {}
        impl PartialOrd for Entry {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Entry {
            fn cmp(&self, o: &Self) -> Ordering {
                self.0.total_cmp(&o.0).then(self.1.cmp(&o.1))
            }
        }
        let mut heap = BinaryHeap::new();
        for d in self.base_disks() {
            heap.push(Entry(d.diameter(), 0, d));
        }
        while let Some(Entry(diam, level, d)) = heap.pop() {
            if level == l {
                return diam;
            }
            for c in self.children(&d) {
                heap.push(Entry(c.diameter(), level + 1, c));
            }
        }
        0.0
    }

    /// Disks of spherical diameter at most `eps` covering the limit set,
    /// obtained by subdividing every larger disk.
    pub fn limit_set_approx(&self, eps: f64, cap: usize) -> Result<LimitCover, GroupError> {
        let mut out = Vec::new();
        let mut deepest = 0;
        let mut stack: Vec<LevelDisk> = self.base_disks().into_iter().rev().collect();
        while let Some(d) = stack.pop() {
            if d.diameter() <= eps {
                deepest = deepest.max(d.word.len());
                out.push(d);
                if out.len() + stack.len() > cap {
                    return Err(GroupError::ExplosionGuard { count: out.len() + stack.len(), cap });
                }
                continue;
            }
            stack.extend(self.children(&d).into_iter().rev());
            if out.len() + stack.len() > cap {
                return Err(GroupError::ExplosionGuard { count: out.len() + stack.len(), cap });
            }
        }
        Ok(LimitCover {
            circles: out
                .iter()
                .map(|d| {
                    let c = d.circle.center();
                    (c.re, c.im, d.circle.radius())
                })
                .collect(),
            words: out
                .iter()
                .map(|d| {
                    let mut w = d.word.letters().to_vec();
                    w.push(d.vertex);
                    w
                })
                .collect(),
            deepest_level: deepest,
        })
    }

    /// Whether the tangency graph of the level-`l` disks is connected.
    pub fn level_connectivity(&self, l: usize) -> Result<bool, GroupError> {
        self.level_connectivity_capped(l, DEFAULT_DISK_CAP)
    }

    pub fn level_connectivity_capped(&self, l: usize, cap: usize) -> Result<bool, GroupError> {
        Ok(self.level_components(l, cap)? == 1)
    }

    /// Components of the tangency graph of the level-`l` disks.
    pub fn level_components(&self, l: usize, cap: usize) -> Result<usize, GroupError> {
        let count = saturating_count(self.generators(), l);
        let pairs = self.level_tangencies(l, cap)?;
        let mut parent: Vec<usize> = (0..count).collect();
        for (i, j) in pairs {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
        Ok((0..count).filter(|&x| find(&mut parent, x) == x).count())
    }

    /// Touching pairs among the level-`l` disks, indexed in the order of
    /// `level_disks`.
    ///
    /// Deep disks are far too small for a numerical tangency test, so
    /// tangencies are read off the words. Writing a disk as the word `W` with
    /// its vertex appended, `u a` and `u b` touch exactly when `a` and `b`
    /// alternate between two adjacent letters `j`, `m` and are swapped
    /// copies of each other; the contact point is the image of the tangency
    /// point of `D_j` and `D_m` under `u`.
    pub fn level_tangencies(&self, l: usize, cap: usize) -> Result<Vec<(usize, usize)>, GroupError> {
        let n = self.generators();
        let full = saturating_count(n, l);
        if full > cap {
            return Err(GroupError::ExplosionGuard { count: full, cap });
        }
        let g = &self.packing.graph;
        let adjacent: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| g.has_edge(a, b)).collect()).collect();
        let mut words: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();
        for _ in 0..l {
            words = words
                .iter()
                .flat_map(|w| {
                    let last = *w.last().expect("words are non-empty");
                    (0..n).filter(move |&k| k != last).map(move |k| {
                        let mut v = w.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut pairs = Vec::new();
        let len = l + 1;
        let mut partner = Vec::with_capacity(len);
        for (i, w) in words.iter().enumerate() {
            let k = w[len - 1];
            for m in (0..n).filter(|&m| adjacent[k][m]) {
                // suffixes k, m k, k m k, ... alternating up to the start
                for t in 1..=len {
                    let expect = if (t - 1) % 2 == 0 { k } else { m };
                    if w[len - t] != expect {
                        break;
                    }
                    let u = &w[..len - t];
                    let s = &w[len - t..];
                    // the swapped suffix starts with the other letter
                    let first = if expect == k { m } else { k };
                    if u.last() == Some(&first) {
                        continue;
                    }
                    partner.clear();
                    partner.extend_from_slice(u);
                    partner.extend(s.iter().map(|&x| if x == k { m } else { k }));
                    if let Some(&j) = index.get(partner.as_slice()) {
                        if i < j {
                            pairs.push((i, j));
                        }
                    }
                }
            }
        }
        Ok(pairs)
    }
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let z = p[y];
        p[y] = r;
        y = z;
    }
    r
}

/// Number of connected components of the tangency graph, where two circles
/// touch when their inversive distance is within `tol` of 1.
pub fn tangency_components(circles: &[Circle<f64>], tol: f64) -> usize {
    let n = circles.len();
    if n == 0 {
        return 0;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    // bounded disks are swept by x-extent; unbounded ones meet everything
    let mut idx: Vec<usize> = (0..n).collect();
    let span = |c: &Circle<f64>| {
        if c.orientation() > 0 && !c.is_line() {
            let (z, r) = (c.center(), c.radius());
            (z.re - r, z.re + r)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    };
    idx.sort_by(|&a, &b| span(&circles[a]).0.total_cmp(&span(&circles[b]).0));
    let slack = 1e-9;
    for (pos, &a) in idx.iter().enumerate() {
        let (_, hi) = span(&circles[a]);
        for &b in &idx[pos + 1..] {
            if span(&circles[b]).0 > hi + slack {
                break;
            }
            if (circles[a].inversive_distance(&circles[b]) - 1.0).abs() <= tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::regular_polygon_packing;

    #[test]
    fn triangle_levels() {
        let g = KissingGroup::new(&regular_polygon_packing(2).unwrap()).unwrap();
        assert_eq!(g.level_disks(0, None).unwrap().disks.len(), 3);
        let l1 = g.level_disks(1, None).unwrap();
        assert_eq!(l1.disks.len(), 6);
        for d in &l1.disks {
            let parent = g.packing.circles[d.word.first().unwrap()];
            assert!((d.circle.center() - parent.center()).norm() + d.circle.radius() <= parent.radius() + 1e-12);
        }
        let l2 = g.level_disks(2, None).unwrap();
        let l3 = g.level_disks(3, None).unwrap();
        assert_eq!(l3.disks.len(), 24);
        assert!(l3.max_spherical_diameter < l2.max_spherical_diameter);
        assert!((g.max_diameter_at_level(3) - l3.max_spherical_diameter).abs() < 1e-15);
    }

    #[test]
    fn explosion_guard() {
        let g = KissingGroup::new(&regular_polygon_packing(2).unwrap()).unwrap();
        assert_eq!(
            g.level_disks_capped(5, None, 50).unwrap_err(),
            GroupError::ExplosionGuard { count: 96, cap: 50 }
        );
    }

    #[test]
    fn coarse_cover_is_the_packing() {
        let g = KissingGroup::new(&regular_polygon_packing(2).unwrap()).unwrap();
        let cover = g.limit_set_approx(10.0, 1000).unwrap();
        assert_eq!(cover.circles.len(), 3);
        assert_eq!(cover.deepest_level, 0);
    }

    #[test]
    fn fine_cover_contains_cusps() {
        let g = KissingGroup::new(&regular_polygon_packing(2).unwrap()).unwrap();
        let cover = g.limit_set_approx(0.2, 1_000_000).unwrap();
        for j in 0..3 {
            let z = num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 3.0);
            assert!(cover
                .circles
                .iter()
                .any(|&(x, y, r)| (z - num_complex::Complex64::new(x, y)).norm() <= r + 1e-9));
        }
    }

    fn group_of(g: &crate::graph::PlaneGraph) -> KissingGroup {
        KissingGroup::new(&crate::packing::solve_packing(g, 1e-9).unwrap()).unwrap()
    }

    #[test]
    fn k4_levels_and_decay() {
        let k4 = crate::graph::PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap();
        let g = group_of(&k4);
        for l in 0..5 {
            assert_eq!(g.level_disks(l, None).unwrap().disks.len(), 4 * 3usize.pow(l as u32));
        }
        assert!(g.level_connectivity(3).unwrap());
        let mut prev = f64::INFINITY;
        for l in [2, 6, 12] {
            let d = g.max_diameter_at_level(l);
            assert!(d < prev);
            prev = d;
        }
        assert!(g.max_diameter_at_level(40) < 0.05);
    }

    #[test]
    fn word_tangencies_match_geometry() {
        let k4 = crate::graph::PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap();
        for g in [group_of(&k4), KissingGroup::new(&regular_polygon_packing(3).unwrap()).unwrap()] {
            for l in 0..=2 {
                let pairs: std::collections::BTreeSet<(usize, usize)> =
                    g.level_tangencies(l, 1000).unwrap().into_iter().collect();
                let disks = g.level_disks(l, None).unwrap().disks;
                for i in 0..disks.len() {
                    for j in i + 1..disks.len() {
                        let touch = (disks[i].circle.inversive_distance(&disks[j].circle) - 1.0).abs() < 1e-6;
                        assert_eq!(touch, pairs.contains(&(i, j)), "level {l} disks {i} {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn bowtie_splits_at_level_one() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];
        let bowtie =
            crate::graph::PlaneGraph::from_embedding(&pts, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let g = group_of(&bowtie);
        assert!(g.level_connectivity(0).unwrap());
        assert!(!g.level_connectivity(1).unwrap());
    }
}
