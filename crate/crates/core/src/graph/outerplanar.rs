//! Marked outerplanar graphs and the gluing/unmating operations.
//!
//! A marked outerplanar graph on `n` vertices is the cycle `0, 1, ..., n-1`
//! drawn counterclockwise on a circle plus a set of non-crossing chords
//! drawn inside. Gluing two of them puts the chords of the second one
//! outside the circle.

use super::PlaneGraph;
use crate::error::GraphError;

fn normalize_chord(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn is_cycle_edge(n: usize, a: usize, b: usize) -> bool {
    (a + 1) % n == b || (b + 1) % n == a
}

/// The polygon `v_0 ... v_d` with its counterclockwise rotation.
pub fn polygon_graph(d: usize) -> Result<PlaneGraph, GraphError> {
    if d < 2 {
        return Err(GraphError::DegreeTooSmall(d));
    }
    outerplanar_from_chords(d + 1, &[])
}

/// Cycle on `n` vertices plus the given chords drawn inside the circle.
pub fn outerplanar_from_chords(n: usize, chords: &[(usize, usize)]) -> Result<PlaneGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::NotOuterplanar(format!("cycle length {n} is below 3")));
    }
    let mut nb: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect();
    for &(a, b) in chords {
        if a >= n || b >= n || a == b || is_cycle_edge(n, a, b) {
            return Err(GraphError::NotOuterplanar(format!("{{{a}, {b}}} is not a chord")));
        }
        nb[a].push(b);
        nb[b].push(a);
    }
    for (v, list) in nb.iter_mut().enumerate() {
        list.sort_by_key(|&u| (u + n - v) % n);
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::NotOuterplanar(format!("repeated chord at {v}")));
        }
    }
    PlaneGraph::from_rotation(n, &nb)
        .map_err(|e| GraphError::NotOuterplanar(format!("chords cross: {e}")))
}

/// Checks that `g` is a marked 2-connected outerplanar graph and returns its
/// cycle length and chords.
pub fn outer_chords(g: &PlaneGraph) -> Result<(usize, Vec<(usize, usize)>), GraphError> {
    let n = g.vertex_count();
    let fail = |m: &str| Err(GraphError::NotOuterplanar(m.to_string()));
    if n < 3 {
        return fail("fewer than 3 vertices");
    }
    if !g.is_simple() {
        return fail("graph is not simple");
    }
    if (0..n).any(|i| !g.has_edge(i, (i + 1) % n)) {
        return fail("vertices are not labeled along a cycle");
    }
    let marked = (0..g.face_count()).any(|f| {
        let vs = g.face_vertices(f);
        vs.len() == n && {
            let s = vs[0];
            let fwd = (0..n).all(|i| vs[i] == (s + i) % n);
            let bwd = (0..n).all(|i| vs[i] == (s + n - i) % n);
            fwd || bwd
        }
    });
    if !marked {
        return fail("no face is bounded by the labeled cycle");
    }
    let mut chords: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| !is_cycle_edge(n, a, b))
        .map(|(a, b)| normalize_chord(a, b))
        .collect();
    chords.sort_unstable();
    Ok((n, chords))
}

/// Glues two marked outerplanar graphs along their cycles. Chords of `plus`
/// go inside, chords of `minus` outside, and minus vertex `j` is identified
/// with plus vertex `(offset - j) mod n`. Duplicated chords produce parallel
/// edges, so the result may be non-simple.
pub fn glue_along_outer(plus: &PlaneGraph, minus: &PlaneGraph, offset: usize) -> Result<PlaneGraph, GraphError> {
    let (n, pc) = outer_chords(plus)?;
    let (m, mc) = outer_chords(minus)?;
    if n != m {
        return Err(GraphError::LengthMismatch { plus: n, minus: m });
    }
    let nu = |j: usize| (offset % n + n - j) % n;
    let mc: Vec<(usize, usize)> = mc.iter().map(|&(a, b)| (nu(a), nu(b))).collect();

    // edge ids: cycle edge {i, i+1} is i, then plus chords, then minus chords
    let mut inside: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut outside: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in pc.iter().enumerate() {
        inside[a].push((b, n + k));
        inside[b].push((a, n + k));
    }
    for (k, &(a, b)) in mc.iter().enumerate() {
        outside[a].push((b, n + pc.len() + k));
        outside[b].push((a, n + pc.len() + k));
    }
    let mut rotation = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    for v in 0..n {
        let key = |u: usize| (u + n - v) % n;
        inside[v].sort_by_key(|&(u, _)| key(u));
        outside[v].sort_by_key(|&(u, _)| std::cmp::Reverse(key(u)));
        let mut r = vec![((v + 1) % n, v)];
        r.extend(inside[v].iter().copied());
        r.push(((v + n - 1) % n, (v + n - 1) % n));
        r.extend(outside[v].iter().copied());
        rotation.push(r.iter().map(|x| x.0).collect::<Vec<_>>());
        ids.push(r.iter().map(|x| x.1).collect::<Vec<_>>());
    }
    PlaneGraph::from_rotation_edges(n, &rotation, Some(&ids))
}

/// Splits `g` along a Hamiltonian cycle. Chords on the left of the cycle
/// form `plus`, labeled by position along the cycle; chords on the right
/// form `minus`, where position `i` becomes label `n - 1 - i`. Gluing the
/// pair with the default offset gives back `g` with vertex `i` standing for
/// `cycle[i]`.
pub fn unmate(g: &PlaneGraph, cycle: &[usize]) -> Result<(PlaneGraph, PlaneGraph), GraphError> {
    let n = g.vertex_count();
    let bad = |m: String| Err(GraphError::NotHamiltonianCycle(m));
    if !g.is_simple() {
        return Err(GraphError::NotSimple);
    }
    if cycle.len() != n || n < 3 {
        return bad(format!("cycle has {} vertices, graph has {n}", cycle.len()));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in cycle.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return bad(format!("vertex {v} repeated or out of range"));
        }
        pos[v] = i;
    }
    for i in 0..n {
        if !g.has_edge(cycle[i], cycle[(i + 1) % n]) {
            return bad(format!("{} and {} are not adjacent", cycle[i], cycle[(i + 1) % n]));
        }
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..n {
        let v = cycle[i];
        let succ = cycle[(i + 1) % n];
        let pred = cycle[(i + n - 1) % n];
        let start = g.dart_between(v, succ).expect("cycle edge exists");
        let mut left = true;
        let mut d = g.next(start);
        while d != start {
            let u = g.target(d);
            if u == pred {
                left = false;
            } else if pos[u] > i {
                let j = pos[u];
                if left {
                    plus.push((i, j));
                } else {
                    minus.push((n - 1 - j, n - 1 - i));
                }
            }
            d = g.next(d);
        }
    }
    plus.sort_unstable();
    minus.sort_unstable();
    Ok((outerplanar_from_chords(n, &plus)?, outerplanar_from_chords(n, &minus)?))
}

#[cfg(test)]
mod tests {
    use super::super::{is_isomorphic, PlaneGraph};
    use super::*;

    fn chord(n: usize, a: usize, b: usize) -> PlaneGraph {
        outerplanar_from_chords(n, &[(a, b)]).unwrap()
    }

    fn k4() -> PlaneGraph {
        PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap()
    }

    #[test]
    fn polygons() {
        assert!(matches!(polygon_graph(1), Err(GraphError::DegreeTooSmall(1))));
        let h = polygon_graph(5).unwrap();
        assert_eq!((h.vertex_count(), h.face_count()), (6, 2));
        assert_eq!(polygon_graph(2).unwrap().edge_count(), 3);
    }

    #[test]
    fn crossing_chords_are_rejected() {
        assert!(outerplanar_from_chords(4, &[(0, 2), (1, 3)]).is_err());
    }

    #[test]
    fn glue_examples() {
        let g = glue_along_outer(&chord(4, 0, 2), &chord(4, 0, 2), 3).unwrap();
        assert!(g.is_simple());
        assert!(g.is_k_connected(3).unwrap());
        assert!(is_isomorphic(&g, &k4()));
        let h = glue_along_outer(&chord(4, 0, 2), &chord(4, 1, 3), 3).unwrap();
        assert!(!h.is_simple());
        let sq = polygon_graph(3).unwrap();
        let s = glue_along_outer(&sq, &sq, 3).unwrap();
        assert!(s.is_simple() && is_isomorphic(&s, &sq));
        assert_eq!(
            glue_along_outer(&sq, &polygon_graph(4).unwrap(), 3),
            Err(GraphError::LengthMismatch { plus: 4, minus: 5 })
        );
        assert!(matches!(glue_along_outer(&k4(), &sq, 3), Err(GraphError::NotOuterplanar(_))));
    }

    #[test]
    fn unmate_k4() {
        let (p, m) = unmate(&k4(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(outer_chords(&p).unwrap().1.len(), 1);
        assert_eq!(outer_chords(&m).unwrap().1.len(), 1);
        let g = glue_along_outer(&p, &m, 3).unwrap();
        assert!(is_isomorphic(&g, &k4()));
        let sq = polygon_graph(3).unwrap();
        let (a, b) = unmate(&sq, &[0, 1, 2, 3]).unwrap();
        assert_eq!(a, sq);
        assert_eq!(b, sq);
        assert!(matches!(unmate(&sq, &[0, 2, 1, 3]), Err(GraphError::NotHamiltonianCycle(_))));
    }
}
