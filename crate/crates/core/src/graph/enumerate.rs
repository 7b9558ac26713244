//! Exhaustive generation of small simple plane graphs.
//!
//! Every simple plane graph on `n >= 3` vertices is a spanning subgraph of a
//! simple triangulation, and all triangulations on `n` vertices are connected
//! by edge flips. So we flip our way through the triangulations and then
//! delete edges, keeping whatever the caller's predicate accepts. Results are
//! deduplicated up to plane isomorphism including reflection.

use std::collections::{HashSet, VecDeque};

use super::{canonical_code, PlaneGraph};

type Rot = Vec<Vec<usize>>;

fn build(rot: &Rot) -> PlaneGraph {
    PlaneGraph::from_rotation(rot.len(), rot).expect("generated rotation is planar")
}

fn position(list: &[usize], x: usize) -> usize {
    list.iter().position(|&y| y == x).expect("neighbor present")
}

fn stacked(n: usize) -> Rot {
    let mut rot: Rot = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    for x in 3..n {
        // insert x into the face left of 0 -> 1, which is the triangle 0, 1, w
        let (a, b) = (0, 1);
        let w = rot[b][(position(&rot[b], a) + rot[b].len() - 1) % rot[b].len()];
        let tri = [a, b, w];
        rot.push(tri.to_vec());
        for k in 0..3 {
            let (p, q) = (tri[k], tri[(k + 1) % 3]);
            let i = position(&rot[p], q);
            rot[p].insert(i + 1, x);
        }
    }
    rot
}

fn flip(rot: &Rot, u: usize, v: usize) -> Option<Rot> {
    if rot[u].len() <= 3 || rot[v].len() <= 3 {
        return None;
    }
    let dv = rot[v].len();
    let du = rot[u].len();
    let w = rot[v][(position(&rot[v], u) + dv - 1) % dv];
    let x = rot[u][(position(&rot[u], v) + du - 1) % du];
    if w == x || rot[w].contains(&x) {
        return None;
    }
    let mut r = rot.clone();
    r[u].retain(|&y| y != v);
    r[v].retain(|&y| y != u);
    let i = position(&r[w], u);
    r[w].insert(i + 1, x);
    let j = position(&r[x], v);
    r[x].insert(j + 1, w);
    Some(r)
}

/// All simple triangulations of the sphere on `n >= 3` vertices.
pub fn triangulations(n: usize) -> Vec<PlaneGraph> {
    assert!(n >= 3, "triangulations need at least 3 vertices");
    let start = stacked(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_code(&build(&start), true));
    queue.push_back(start);
    while let Some(rot) = queue.pop_front() {
        for u in 0..n {
            for &v in &rot[u] {
                if u < v {
                    if let Some(r) = flip(&rot, u, v) {
                        if seen.insert(canonical_code(&build(&r), true)) {
                            queue.push_back(r);
                        }
                    }
                }
            }
        }
        out.push(build(&rot));
    }
    out
}

/// All simple plane graphs on `n` vertices satisfying `keep`, where `keep`
/// must be inherited by supergraphs (deleting edges only ever loses it).
pub fn plane_graphs<F>(n: usize, keep: F) -> Vec<PlaneGraph>
where
    F: Fn(&PlaneGraph) -> bool,
{
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<Rot> = VecDeque::new();
    for t in triangulations(n) {
        if keep(&t) && seen.insert(canonical_code(&t, true)) {
            queue.push_back(t.rotation());
        }
    }
    while let Some(rot) = queue.pop_front() {
        for u in 0..n {
            for &v in &rot[u] {
                if u < v {
                    let mut r = rot.clone();
                    r[u].retain(|&y| y != v);
                    r[v].retain(|&y| y != u);
                    let Ok(g) = PlaneGraph::from_rotation(n, &r) else {
                        continue;
                    };
                    if keep(&g) && seen.insert(canonical_code(&g, true)) {
                        queue.push_back(r);
                    }
                }
            }
        }
        out.push(build(&rot));
    }
    out
}

/// All 2-connected simple plane graphs on `n >= 3` vertices.
pub fn two_connected(n: usize) -> Vec<PlaneGraph> {
    plane_graphs(n, |g| g.connectivity() >= 2)
}

/// All connected simple plane graphs on `n >= 3` vertices.
pub fn connected(n: usize) -> Vec<PlaneGraph> {
    plane_graphs(n, |_| true)
}
