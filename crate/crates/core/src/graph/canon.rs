//! Canonical codes for rooted rotation systems.
//!
//! From a root dart, darts are numbered in breadth-first order along
//! `next` and `twin`; the code lists, for every dart in that order, the
//! numbers of its `next` and its `twin`. The code determines the plane graph
//! up to orientation-preserving isomorphism, so the minimum over all roots is
//! a complete invariant. Walking with `prev` instead of `next` gives the code
//! of the mirror image.

use super::PlaneGraph;

fn rooted_code(g: &PlaneGraph, root: usize, mirrored: bool, best: Option<&[u32]>) -> Option<Vec<u32>> {
    let m = g.dart_count();
    let step = |d: usize| if mirrored { g.prev(d) } else { g.next(d) };
    let mut label = vec![u32::MAX; m];
    let mut order = Vec::with_capacity(m);
    let mut code = Vec::with_capacity(2 * m + 1);
    label[root] = 0;
    order.push(root);
    let mut i = 0;
    let mut smaller = false;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for y in [step(x), g.twin(x)] {
            if label[y] == u32::MAX {
                label[y] = order.len() as u32;
                order.push(y);
            }
            let c = label[y];
            if let (Some(b), false) = (best, smaller) {
                let k = code.len();
                if c > b[k] {
                    return None;
                }
                if c < b[k] {
                    smaller = true;
                }
            }
            code.push(c);
        }
    }
    if !smaller && best.is_some() {
        return None;
    }
    Some(code)
}

/// Minimum rooted code over all darts (and over mirror images when
/// `with_reflection` is set), prefixed by vertex and dart counts.
pub fn canonical_code(g: &PlaneGraph, with_reflection: bool) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    let modes: &[bool] = if with_reflection { &[false, true] } else { &[false] };
    for &mirrored in modes {
        for root in 0..g.dart_count() {
            if let Some(c) = rooted_code(g, root, mirrored, best.as_deref()) {
                best = Some(c);
            }
        }
    }
    let mut out = vec![g.vertex_count() as u32, g.dart_count() as u32];
    out.extend(best.unwrap_or_default());
    out
}

/// Orientation-preserving plane-graph isomorphism.
pub fn is_isomorphic(a: &PlaneGraph, b: &PlaneGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.dart_count() == b.dart_count()
        && a.face_count() == b.face_count()
        && canonical_code(a, false) == canonical_code(b, false)
}

/// Isomorphism allowing the orientation to be reversed.
pub fn is_isomorphic_up_to_reflection(a: &PlaneGraph, b: &PlaneGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.dart_count() == b.dart_count()
        && a.face_count() == b.face_count()
        && canonical_code(a, true) == canonical_code(b, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_is_invariant_under_relabeling() {
        let g = super::super::polygon_graph(5).unwrap();
        let h = g.relabel(&[3, 1, 4, 0, 5, 2]).unwrap();
        assert_eq!(canonical_code(&g, false), canonical_code(&h, false));
    }

    #[test]
    fn chiral_graph_differs_from_mirror() {
        // a triangle with pendant paths of lengths 1, 2 and 3 attached is
        // chiral once the attachments are placed inside/outside asymmetrically
        let pts = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (1.0, 1.0), (3.0, 0.5), (3.5, 0.2), (2.0, 2.0), (2.2, 1.5), (2.4, 1.2)];
        let e = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (4, 5), (2, 6), (6, 7), (7, 8)];
        let g = PlaneGraph::from_embedding(&pts, &e).unwrap();
        let m = g.mirror();
        assert!(is_isomorphic_up_to_reflection(&g, &m));
        assert!(!is_isomorphic(&g, &m));
    }
}
