//! Mateability of pairs of critically fixed anti-polynomials, decided both
//! from laminations (ray equivalence classes) and from graph gluing.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::angle::{lamination_of, Angle, Lamination, Leaf};
use crate::error::{GraphError, MatingError};
use crate::graph::{glue_along_outer, is_isomorphic, outer_chords, unmate, GraphDocument, PlaneGraph, HAMILTONIAN_CAP};

/// Bipartite graph whose vertices are the P- and Q-classes of the angles
/// and whose edges are the angles themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayClassGraph {
    pub angles: Vec<Angle>,
    /// P-class of each angle.
    pub p_class: Vec<usize>,
    /// Q-class of each angle (read through `θ ↦ −θ`).
    pub q_class: Vec<usize>,
    pub p_count: usize,
    pub q_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayClass {
    pub angles: Vec<Angle>,
    pub p_classes: usize,
    pub q_classes: usize,
    /// `E − V + 1` of the component.
    pub cycle_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub obstructed: bool,
    /// Angles along a cycle of the class graph, alternating P- and Q-steps.
    pub witness: Vec<Angle>,
    pub classes: Vec<RayClass>,
}

fn check_pair(lp: &Lamination, lq: &Lamination) -> Result<(), MatingError> {
    if lp.degree != lq.degree {
        return Err(MatingError::DegreeMismatch(lp.degree as u32, lq.degree as u32));
    }
    lp.validate()?;
    lq.validate()?;
    Ok(())
}

fn partner(leaves: &BTreeSet<Leaf>, t: &Angle) -> Vec<Angle> {
    leaves
        .iter()
        .filter(|l| l.contains(t))
        .map(|l| {
            let [a, b] = l.angles();
            if a == t {
                b.clone()
            } else {
                a.clone()
            }
        })
        .collect()
}

/// Closes the principal angles of both laminations under the two leaf
/// relations and builds the class graph.
pub fn ray_classes(lp: &Lamination, lq: &Lamination) -> Result<RayClassGraph, MatingError> {
    check_pair(lp, lq)?;
    let q = lq.mirror();
    let mut index: BTreeMap<Angle, usize> = BTreeMap::new();
    let mut angles: Vec<Angle> = Vec::new();
    let mut queue = VecDeque::new();
    let mut add = |t: Angle, index: &mut BTreeMap<Angle, usize>, queue: &mut VecDeque<Angle>| {
        if !index.contains_key(&t) {
            index.insert(t.clone(), angles.len());
            angles.push(t.clone());
            queue.push_back(t);
        }
    };
    for t in lp.angles().into_iter().chain(q.angles()) {
        add(t, &mut index, &mut queue);
    }
    while let Some(t) = queue.pop_front() {
        for u in partner(&lp.leaves, &t).into_iter().chain(partner(&q.leaves, &t)) {
            add(u, &mut index, &mut queue);
        }
    }
    let n = angles.len();
    let classes = |leaves: &BTreeSet<Leaf>| -> (Vec<usize>, usize) {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for l in leaves {
            let [a, b] = l.angles();
            if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
        let mut label = BTreeMap::new();
        let out: Vec<usize> = (0..n)
            .map(|i| {
                let r = find(&mut parent, i);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect();
        (out, label.len())
    };
    let (p_class, p_count) = classes(&lp.leaves);
    let (q_class, q_count) = classes(&q.leaves);
    Ok(RayClassGraph {
        angles,
        p_class,
        q_class,
        p_count,
        q_count,
    })
}

impl RayClassGraph {
    /// Class-graph vertex of a P-class is its index, of a Q-class
    /// `p_count + index`.
    fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.p_class[e], self.p_count + self.q_class[e])
    }

    /// Connected components as lists of angle indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let v = self.p_count + self.q_count;
        let mut adj = vec![Vec::new(); v];
        for e in 0..self.angles.len() {
            let (a, b) = self.endpoints(e);
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        let mut seen = vec![false; v];
        let mut out = Vec::new();
        for s in 0..v {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut edges = BTreeSet::new();
            while let Some(x) = stack.pop() {
                for &(y, e) in &adj[x] {
                    edges.insert(e);
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if !edges.is_empty() {
                out.push(edges.into_iter().collect());
            }
        }
        out
    }

    /// A cycle of the class graph as a list of angle indices, if any.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let v = self.p_count + self.q_count;
        let mut adj = vec![Vec::new(); v];
        for e in 0..self.angles.len() {
            let (a, b) = self.endpoints(e);
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        // BFS forest; the first non-tree edge closes a cycle through the
        // paths to the common ancestor
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; v];
        let mut depth = vec![usize::MAX; v];
        for s in 0..v {
            if depth[s] != usize::MAX {
                continue;
            }
            depth[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &adj[x] {
                    if parent[x].map(|p| p.1) == Some(e) {
                        continue;
                    }
                    if depth[y] == usize::MAX {
                        depth[y] = depth[x] + 1;
                        parent[y] = Some((x, e));
                        queue.push_back(y);
                    } else {
                        let (mut a, mut b) = (x, y);
                        let mut left = Vec::new();
                        let mut right = Vec::new();
                        while depth[a] > depth[b] {
                            let (p, pe) = parent[a].expect("non-root has a parent");
                            left.push(pe);
                            a = p;
                        }
                        while depth[b] > depth[a] {
                            let (p, pe) = parent[b].expect("non-root has a parent");
                            right.push(pe);
                            b = p;
                        }
                        while a != b {
                            let (pa, ea) = parent[a].expect("non-root has a parent");
                            let (pb, eb) = parent[b].expect("non-root has a parent");
                            left.push(ea);
                            right.push(eb);
                            a = pa;
                            b = pb;
                        }
                        let mut cycle = vec![e];
                        cycle.extend(right);
                        cycle.extend(left.into_iter().rev());
                        return Some(cycle);
                    }
                }
            }
        }
        None
    }
}

/// Looks for a cycle among the principal ray classes.
pub fn detect_obstruction(lp: &Lamination, lq: &Lamination) -> Result<ObstructionReport, MatingError> {
    let g = ray_classes(lp, lq)?;
    let classes = g
        .components()
        .into_iter()
        .map(|comp| {
            let p: BTreeSet<usize> = comp.iter().map(|&e| g.p_class[e]).collect();
            let q: BTreeSet<usize> = comp.iter().map(|&e| g.q_class[e]).collect();
            let mut angles: Vec<Angle> = comp.iter().map(|&e| g.angles[e].clone()).collect();
            angles.sort();
            RayClass {
                cycle_rank: comp.len() + 1 - p.len() - q.len(),
                angles,
                p_classes: p.len(),
                q_classes: q.len(),
            }
        })
        .collect();
    let witness: Vec<Angle> = g
        .find_cycle()
        .map(|c| c.into_iter().map(|e| g.angles[e].clone()).collect())
        .unwrap_or_default();
    Ok(ObstructionReport {
        obstructed: !witness.is_empty(),
        witness,
        classes,
    })
}

/// True when `L_P` and the mirror of `L_Q` share no leaf.
pub fn non_parallel(lp: &Lamination, lq: &Lamination) -> Result<bool, MatingError> {
    if lp.degree != lq.degree {
        return Err(MatingError::DegreeMismatch(lp.degree as u32, lq.degree as u32));
    }
    let q = lq.mirror();
    Ok(lp.leaves.is_disjoint(&q.leaves))
}

/// The rotation of the minus lamination matching the gluing offset, so that
/// the default offset `d` needs no rotation.
pub fn rotation_for_offset(d: usize, offset: usize) -> i64 {
    let m = d + 1;
    ((d + m - offset % m) % m) as i64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelWitness {
    /// Chord of `plus`, which `minus` also has after relabeling.
    pub chord: (usize, usize),
    pub leaf: [Angle; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MateVerdict {
    pub mateable: bool,
    pub offset: usize,
    pub glued: Option<GraphDocument>,
    pub witness: Vec<ParallelWitness>,
}

/// Glues two marked outerplanar graphs and cross-checks the outcome with
/// the lamination test.
pub fn mate_graphs(plus: &PlaneGraph, minus: &PlaneGraph, offset: usize) -> Result<MateVerdict, MatingError> {
    let (n, pc) = outer_chords(plus)?;
    let (m, mc) = outer_chords(minus)?;
    if n != m {
        return Err(GraphError::LengthMismatch { plus: n, minus: m }.into());
    }
    let glued = glue_along_outer(plus, minus, offset)?;
    let mateable = glued.is_simple();
    let d = n - 1;
    let lp = lamination_of(plus)?;
    let lq = lamination_of(minus)?.rotate(rotation_for_offset(d, offset));
    let lam_ok = non_parallel(&lp, &lq)?;
    if lam_ok != mateable {
        return Err(MatingError::CrossCheckMismatch(format!(
            "glued graph simple = {mateable}, laminations non-parallel = {lam_ok}"
        )));
    }
    let nu = |j: usize| (offset % n + n - j) % n;
    let moved: BTreeSet<(usize, usize)> = mc
        .iter()
        .map(|&(a, b)| (nu(a).min(nu(b)), nu(a).max(nu(b))))
        .collect();
    let shared = lp.leaves.intersection(&lq.mirror().leaves).cloned().collect::<Vec<_>>();
    let witness = pc
        .iter()
        .filter(|c| moved.contains(c))
        .map(|&(a, b)| {
            let leaf = crate::angle::leaf_for_chord(d, a, b).expect("chord of a valid graph");
            debug_assert!(shared.contains(&leaf));
            ParallelWitness {
                chord: (a, b),
                leaf: leaf.angles().clone(),
            }
        })
        .collect();
    Ok(MateVerdict {
        mateable,
        offset,
        glued: mateable.then(|| glued.to_document()),
        witness,
    })
}

/// How `shared_matings` merges entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dedup {
    /// One entry per Hamiltonian cycle.
    #[default]
    Labeled,
    /// Ordered pairs `(Γ+, Γ−)` up to plane isomorphism.
    Ordered,
    /// Unordered pairs up to plane isomorphism.
    Unordered,
}

#[derive(Debug, Clone)]
pub struct Unmating {
    pub cycle: Vec<usize>,
    pub plus: PlaneGraph,
    pub minus: PlaneGraph,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmatingDocument {
    pub cycle: Vec<usize>,
    pub plus: GraphDocument,
    pub minus: GraphDocument,
}

impl Unmating {
    pub fn to_document(&self) -> UnmatingDocument {
        UnmatingDocument {
            cycle: self.cycle.clone(),
            plus: self.plus.to_document(),
            minus: self.minus.to_document(),
        }
    }
}

/// Every way of splitting `g` along a Hamiltonian cycle.
pub fn shared_matings(g: &PlaneGraph, dedup: Dedup) -> Result<Vec<Unmating>, MatingError> {
    shared_matings_capped(g, dedup, HAMILTONIAN_CAP)
}

pub fn shared_matings_capped(g: &PlaneGraph, dedup: Dedup, cap: usize) -> Result<Vec<Unmating>, MatingError> {
    if !g.is_simple() {
        return Err(GraphError::NotSimple.into());
    }
    let cycles = g.hamiltonian_cycles_capped(cap)?;
    if cycles.is_empty() {
        return Err(GraphError::NotHamiltonian.into());
    }
    let mut out: Vec<Unmating> = Vec::new();
    for cycle in cycles {
        let (plus, minus) = unmate(g, &cycle)?;
        let dup = out.iter().any(|u| match dedup {
            Dedup::Labeled => false,
            Dedup::Ordered => is_isomorphic(&u.plus, &plus) && is_isomorphic(&u.minus, &minus),
            Dedup::Unordered => {
                (is_isomorphic(&u.plus, &plus) && is_isomorphic(&u.minus, &minus))
                    || (is_isomorphic(&u.plus, &minus) && is_isomorphic(&u.minus, &plus))
            }
        });
        if !dup {
            out.push(Unmating { cycle, plus, minus });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{fixed_angles, Leaf};
    use crate::graph::{outerplanar_from_chords, polygon_graph};

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn chord_lam(i: usize, j: usize) -> Lamination {
        lamination_of(&outerplanar_from_chords(4, &[(i, j)]).unwrap()).unwrap()
    }

    #[test]
    fn basilica_tuned_pair_is_unobstructed() {
        let lq = Lamination::new(
            3,
            [Leaf::new(a("0"), a("3/4")), Leaf::new(a("1/2"), a("1/4"))],
            fixed_angles(3).unwrap(),
        )
        .unwrap();
        let lp = chord_lam(0, 2);
        let g = ray_classes(&lp, &lq).unwrap();
        let report = detect_obstruction(&lp, &lq).unwrap();
        assert!(!report.obstructed);
        assert!(report.classes.iter().all(|c| c.cycle_rank == 0));
        // mirrored Q-leaves join 0 with 1/4 and 1/2 with 3/4
        let idx = |s: &str| g.angles.iter().position(|t| *t == a(s)).unwrap();
        assert_eq!(g.q_class[idx("0")], g.q_class[idx("1/4")]);
        assert_eq!(g.q_class[idx("1/2")], g.q_class[idx("3/4")]);
        assert_eq!(g.p_class[idx("1/8")], g.p_class[idx("5/8")]);
    }

    #[test]
    fn parallel_leaves_obstruct() {
        let report = detect_obstruction(&chord_lam(0, 2), &chord_lam(1, 3)).unwrap();
        assert!(report.obstructed);
        let mut w = report.witness.clone();
        w.sort();
        assert_eq!(w, vec![a("1/8"), a("5/8")]);
        assert!(!detect_obstruction(&chord_lam(0, 2), &chord_lam(0, 2)).unwrap().obstructed);
        assert!(!non_parallel(&chord_lam(0, 2), &chord_lam(1, 3)).unwrap());
        assert!(non_parallel(&chord_lam(0, 2), &chord_lam(0, 2)).unwrap());
        assert!(non_parallel(&chord_lam(0, 2), &Lamination::empty(3).unwrap()).unwrap());
    }

    #[test]
    fn empty_q_gives_trees() {
        let lp = chord_lam(0, 2);
        let report = detect_obstruction(&lp, &Lamination::empty(3).unwrap()).unwrap();
        assert!(!report.obstructed);
        assert!(report.classes.iter().all(|c| c.angles.len() <= 2 && c.cycle_rank == 0));
    }

    #[test]
    fn degree_mismatch() {
        let l2 = Lamination::empty(2).unwrap();
        assert_eq!(
            detect_obstruction(&chord_lam(0, 2), &l2).unwrap_err(),
            MatingError::DegreeMismatch(3, 2)
        );
    }

    #[test]
    fn mating_examples() {
        let p = outerplanar_from_chords(4, &[(0, 2)]).unwrap();
        let q = outerplanar_from_chords(4, &[(1, 3)]).unwrap();
        let v = mate_graphs(&p, &p, 3).unwrap();
        assert!(v.mateable);
        let glued = PlaneGraph::from_document(v.glued.as_ref().unwrap()).unwrap();
        assert_eq!((glued.vertex_count(), glued.edge_count()), (4, 6));
        let bad = mate_graphs(&p, &q, 3).unwrap();
        assert!(!bad.mateable);
        assert_eq!(bad.witness.len(), 1);
        assert_eq!(bad.witness[0].chord, (0, 2));
        assert_eq!(bad.witness[0].leaf, [a("1/8"), a("5/8")]);
        let sq = polygon_graph(3).unwrap();
        let v = mate_graphs(&sq, &sq, 3).unwrap();
        assert!(v.mateable);
        assert_eq!(PlaneGraph::from_document(v.glued.as_ref().unwrap()).unwrap().edge_count(), 4);
    }

    #[test]
    fn unmatings() {
        let k4 = PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap();
        assert_eq!(shared_matings(&k4, Dedup::Labeled).unwrap().len(), 3);
        for u in shared_matings(&k4, Dedup::Labeled).unwrap() {
            assert_eq!(outer_chords(&u.plus).unwrap().1.len(), 1);
            assert_eq!(outer_chords(&u.minus).unwrap().1.len(), 1);
        }
        let sq_chord = outerplanar_from_chords(4, &[(0, 2)]).unwrap();
        assert_eq!(shared_matings(&sq_chord, Dedup::Labeled).unwrap().len(), 1);
        let sq = polygon_graph(3).unwrap();
        let u = shared_matings(&sq, Dedup::Labeled).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].plus.edge_count(), 4);
        assert_eq!(u[0].minus.edge_count(), 4);
        let star = PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(
            shared_matings(&star, Dedup::Labeled).unwrap_err(),
            MatingError::Graph(GraphError::NotHamiltonian)
        );
    }

    fn all_outerplanar(n: usize) -> Vec<PlaneGraph> {
        let chords: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 2..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !(a == 0 && b == n - 1))
            .collect();
        (0..1u32 << chords.len())
            .filter_map(|mask| {
                let set: Vec<_> = chords.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c).collect();
                outerplanar_from_chords(n, &set).ok()
            })
            .collect()
    }

    #[test]
    fn gluing_matches_laminations_exhaustively() {
        for n in 3..=6 {
            let graphs = all_outerplanar(n);
            let d = n - 1;
            for p in &graphs {
                let lp = lamination_of(p).unwrap();
                for q in &graphs {
                    for offset in 0..n {
                        // mate_graphs fails on any disagreement
                        let v = mate_graphs(p, q, offset).unwrap();
                        let lq = lamination_of(q).unwrap().rotate(rotation_for_offset(d, offset));
                        let report = detect_obstruction(&lp, &lq).unwrap();
                        assert_eq!(v.mateable, !report.obstructed, "n={n} offset={offset}");
                        assert_eq!(v.mateable, v.witness.is_empty());
                    }
                }
            }
        }
    }
}
