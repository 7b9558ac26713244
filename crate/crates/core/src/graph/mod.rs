//! Plane graphs stored as rotation systems.
//!
//! A dart is a directed half-edge. Each dart knows its origin, its twin (the
//! reverse half-edge) and the next dart counterclockwise around its origin.
//! Faces are the orbits of `d -> prev(twin(d))`, which keeps the face on the
//! left, so bounded faces of a straight-line drawing are traversed
//! counterclockwise.

mod canon;
pub mod enumerate;
mod outerplanar;
pub mod platonic;
mod predicates;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub use canon::{canonical_code, is_isomorphic, is_isomorphic_up_to_reflection};
pub use outerplanar::{glue_along_outer, outer_chords, outerplanar_from_chords, polygon_graph, unmate};
pub use predicates::{GraphClassification, HAMILTONIAN_CAP};

/// JSON form of a plane graph. `rotation[v]` lists the neighbors of `v` in
/// counterclockwise order; `rotation_edges[v][i]` names the edge used by that
/// entry and is only needed for loops and parallel edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub rotation: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_edges: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneGraph {
    n: usize,
    origin: Vec<usize>,
    twin: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    labels: Option<Vec<i64>>,
    at: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    edge_of: Vec<usize>,
    edges: Vec<usize>,
}

impl PlaneGraph {
    /// Builds a graph from counterclockwise neighbor lists of a simple graph.
    pub fn from_rotation(n: usize, rotation: &[Vec<usize>]) -> Result<Self, GraphError> {
        Self::from_rotation_edges(n, rotation, None)
    }

    /// Builds a graph from neighbor lists, optionally with an edge id per
    /// entry so that loops and parallel edges can be paired up.
    pub fn from_rotation_edges(
        n: usize,
        rotation: &[Vec<usize>],
        edge_ids: Option<&[Vec<usize>]>,
    ) -> Result<Self, GraphError> {
        let bad = |m: String| GraphError::MalformedRotation(m);
        if n == 0 {
            return Err(bad("graph has no vertices".into()));
        }
        if rotation.len() != n {
            return Err(bad(format!("expected {n} neighbor lists, found {}", rotation.len())));
        }
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for (v, r) in rotation.iter().enumerate() {
            for &u in r {
                if u >= n {
                    return Err(bad(format!("vertex {v} lists neighbor {u} out of range")));
                }
            }
            offset.push(offset[v] + r.len());
        }
        let m = offset[n];
        let mut origin = vec![0; m];
        let mut next = vec![0; m];
        for v in 0..n {
            let deg = rotation[v].len();
            for i in 0..deg {
                origin[offset[v] + i] = v;
                next[offset[v] + i] = offset[v] + (i + 1) % deg;
            }
        }
        let mut twin = vec![usize::MAX; m];
        match edge_ids {
            Some(ids) => {
                if ids.len() != n || ids.iter().zip(rotation).any(|(a, b)| a.len() != b.len()) {
                    return Err(bad("rotation_edges shape differs from rotation".into()));
                }
                let mut seen: HashMap<usize, Vec<usize>> = HashMap::new();
                for v in 0..n {
                    for (i, &e) in ids[v].iter().enumerate() {
                        seen.entry(e).or_default().push(offset[v] + i);
                    }
                }
                for (e, ds) in seen {
                    if ds.len() != 2 {
                        return Err(bad(format!("edge {e} appears {} times", ds.len())));
                    }
                    let (a, b) = (ds[0], ds[1]);
                    let head = |d: usize| rotation[origin[d]][d - offset[origin[d]]];
                    if head(a) != origin[b] || head(b) != origin[a] {
                        return Err(bad(format!("edge {e} has inconsistent endpoints")));
                    }
                    twin[a] = b;
                    twin[b] = a;
                }
            }
            None => {
                for v in 0..n {
                    for (i, &u) in rotation[v].iter().enumerate() {
                        if u == v {
                            return Err(bad(format!("loop at {v} needs rotation_edges")));
                        }
                        let here = rotation[v].iter().filter(|&&w| w == u).count();
                        let back: Vec<usize> = rotation[u]
                            .iter()
                            .enumerate()
                            .filter(|(_, &w)| w == v)
                            .map(|(j, _)| j)
                            .collect();
                        if here != 1 || back.len() != 1 {
                            return Err(bad(format!(
                                "edge {v}-{u} is not listed exactly once at each end"
                            )));
                        }
                        twin[offset[v] + i] = offset[u] + back[0];
                    }
                }
            }
        }
        Self::from_darts(n, origin, twin, next, None)
    }

    /// Builds a graph directly from dart permutations and validates it.
    pub fn from_darts(
        n: usize,
        origin: Vec<usize>,
        twin: Vec<usize>,
        next: Vec<usize>,
        labels: Option<Vec<i64>>,
    ) -> Result<Self, GraphError> {
        let bad = |m: String| GraphError::MalformedRotation(m);
        let m = origin.len();
        if twin.len() != m || next.len() != m {
            return Err(bad("dart arrays differ in length".into()));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(bad("label count differs from vertex count".into()));
            }
        }
        for d in 0..m {
            if origin[d] >= n || twin[d] >= m || next[d] >= m {
                return Err(bad(format!("dart {d} references out of range")));
            }
            if twin[d] == d || twin[twin[d]] != d {
                return Err(bad(format!("twin is not a fixed-point-free involution at {d}")));
            }
            if origin[next[d]] != origin[d] {
                return Err(bad(format!("next of dart {d} leaves its origin")));
            }
        }
        let mut prev = vec![usize::MAX; m];
        for d in 0..m {
            if prev[next[d]] != usize::MAX {
                return Err(bad("next is not a permutation".into()));
            }
            prev[next[d]] = d;
        }
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut done = vec![false; m];
        for d in 0..m {
            if done[d] {
                continue;
            }
            let v = origin[d];
            if !at[v].is_empty() {
                return Err(bad(format!("darts at vertex {v} form more than one cycle")));
            }
            let mut x = d;
            loop {
                done[x] = true;
                at[v].push(x);
                x = next[x];
                if x == d {
                    break;
                }
            }
        }
        if n > 1 && at.iter().any(|a| a.is_empty()) {
            return Err(GraphError::Disconnected);
        }

        let mut face_of = vec![usize::MAX; m];
        let mut faces = Vec::new();
        for d in 0..m {
            if face_of[d] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut cyc = Vec::new();
            let mut x = d;
            loop {
                face_of[x] = f;
                cyc.push(x);
                x = prev[twin[x]];
                if x == d {
                    break;
                }
            }
            faces.push(cyc);
        }
        if m == 0 {
            faces.push(Vec::new());
        }
        let mut edge_of = vec![0; m];
        let mut edges = Vec::new();
        for d in 0..m {
            if d < twin[d] {
                edge_of[d] = edges.len();
                edge_of[twin[d]] = edges.len();
                edges.push(d);
            }
        }
        let g = Self {
            n,
            origin,
            twin,
            next,
            prev,
            labels,
            at,
            face_of,
            faces,
            edge_of,
            edges,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let (v, e, f) = (g.n, g.edges.len(), g.faces.len());
        if v + f != e + 2 {
            return Err(GraphError::EulerViolation { v, e, f });
        }
        Ok(g)
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self, GraphError> {
        let mut g = Self::from_rotation_edges(doc.n, &doc.rotation, doc.rotation_edges.as_deref())?;
        if let Some(l) = &doc.labels {
            if l.len() != doc.n {
                return Err(GraphError::MalformedRotation(
                    "label count differs from vertex count".into(),
                ));
            }
            g.labels = Some(l.clone());
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(text)
            .map_err(|e| GraphError::MalformedRotation(format!("invalid JSON: {e}")))?;
        Self::from_document(&doc)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n: self.n,
            rotation: self.rotation(),
            rotation_edges: if self.is_simple() { None } else { Some(self.rotation_edges()) },
            labels: self.labels.clone(),
        }
    }

    /// Straight-line embedding helper: orders each vertex's neighbors by the
    /// angle of the edge at the given point positions.
    pub fn from_embedding(points: &[(f64, f64)], edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = points.len();
        let mut rot: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::MalformedRotation(format!("edge {u}-{v} out of range")));
            }
            let a = (points[v].1 - points[u].1).atan2(points[v].0 - points[u].0);
            let b = (points[u].1 - points[v].1).atan2(points[u].0 - points[v].0);
            rot[u].push((a, v));
            rot[v].push((b, u));
        }
        let rotation: Vec<Vec<usize>> = rot
            .into_iter()
            .map(|mut r| {
                r.sort_by(|x, y| x.0.total_cmp(&y.0));
                r.into_iter().map(|x| x.1).collect()
            })
            .collect();
        Self::from_rotation(n, &rotation)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn dart_count(&self) -> usize {
        self.origin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn origin(&self, d: usize) -> usize {
        self.origin[d]
    }

    pub fn target(&self, d: usize) -> usize {
        self.origin[self.twin[d]]
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn prev(&self, d: usize) -> usize {
        self.prev[d]
    }

    /// Successor of `d` along the boundary of the face on its left.
    pub fn face_next(&self, d: usize) -> usize {
        self.prev[self.twin[d]]
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    pub fn edge_of(&self, d: usize) -> usize {
        self.edge_of[d]
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// Darts leaving `v`, counterclockwise.
    pub fn darts_at(&self, v: usize) -> &[usize] {
        &self.at[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.at[v].len()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.at[v].iter().map(|&d| self.target(d)).collect()
    }

    /// Face boundaries as dart cycles.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Vertices met along the boundary of face `f`, with repetitions.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&d| self.origin[d]).collect()
    }

    /// Endpoints of every edge, indexed by edge id.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&d| (self.origin[d], self.target(d))).collect()
    }

    /// A representative dart for each edge id.
    pub fn edge_darts(&self) -> &[usize] {
        &self.edges
    }

    pub fn rotation(&self) -> Vec<Vec<usize>> {
        self.at.iter().map(|a| a.iter().map(|&d| self.target(d)).collect()).collect()
    }

    pub fn rotation_edges(&self) -> Vec<Vec<usize>> {
        self.at.iter().map(|a| a.iter().map(|&d| self.edge_of[d]).collect()).collect()
    }

    /// Dart from `u` to `v`, if the edge exists.
    pub fn dart_between(&self, u: usize, v: usize) -> Option<usize> {
        self.at[u].iter().copied().find(|&d| self.target(d) == v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.dart_between(u, v).is_some()
    }

    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|v| {
            let mut nb = self.neighbors(v);
            if nb.contains(&v) {
                return false;
            }
            nb.sort_unstable();
            nb.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Adjacency lists of the underlying simple graph, sorted.
    pub fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|v| {
                let mut nb: Vec<usize> = self.neighbors(v).into_iter().filter(|&u| u != v).collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in &self.at[v] {
                let u = self.target(d);
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// The same graph seen in a mirror: every rotation is reversed.
    pub fn mirror(&self) -> Self {
        Self::from_darts(
            self.n,
            self.origin.clone(),
            self.twin.clone(),
            self.prev.clone(),
            self.labels.clone(),
        )
        .expect("mirror of a valid graph is valid")
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let mut inv = vec![usize::MAX; self.n];
        for (v, &p) in perm.iter().enumerate() {
            if p >= self.n || inv[p] != usize::MAX {
                return Err(GraphError::MalformedRotation("relabeling is not a permutation".into()));
            }
            inv[p] = v;
        }
        if perm.len() != self.n {
            return Err(GraphError::MalformedRotation("relabeling has wrong length".into()));
        }
        let origin = self.origin.iter().map(|&v| perm[v]).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| (0..self.n).map(|p| l[inv[p]]).collect());
        Self::from_darts(self.n, origin, self.twin.clone(), self.next.clone(), labels)
    }

    /// Planar dual: one vertex per face, one dual dart per dart. The dual dart
    /// of `d` leaves the face on the left of `d`; darts around a dual vertex
    /// follow the face boundary order.
    pub fn planar_dual(&self) -> Self {
        let origin = self.face_of.clone();
        let twin = self.twin.clone();
        let next = (0..self.dart_count()).map(|d| self.face_next(d)).collect();
        Self::from_darts(self.faces.len(), origin, twin, next, None)
            .expect("dual of a plane graph is a plane graph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k4() -> PlaneGraph {
        PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap()
    }

    fn cube() -> PlaneGraph {
        let pts = [
            (-1.0, -1.0),
            (1.0, -1.0),
            (1.0, 1.0),
            (-1.0, 1.0),
            (-0.4, -0.4),
            (0.4, -0.4),
            (0.4, 0.4),
            (-0.4, 0.4),
        ];
        let mut e = Vec::new();
        for i in 0..4 {
            e.push((i, (i + 1) % 4));
            e.push((4 + i, 4 + (i + 1) % 4));
            e.push((i, i + 4));
        }
        PlaneGraph::from_embedding(&pts, &e).unwrap()
    }

    #[test]
    fn square_has_two_faces() {
        let g = PlaneGraph::from_rotation(4, &[vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap();
        assert_eq!(g.face_count(), 2);
        assert!(g.faces().iter().all(|f| f.len() == 4));
    }

    #[test]
    fn k4_counts() {
        let g = k4();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (4, 6, 4));
        assert!(g.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn k5_rotation_fails_euler() {
        let rot: Vec<Vec<usize>> = (0..5).map(|v| (0..5).filter(|&u| u != v).collect()).collect();
        match PlaneGraph::from_rotation(5, &rot) {
            Err(GraphError::EulerViolation { v: 5, e: 10, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_and_disconnected() {
        assert!(matches!(
            PlaneGraph::from_rotation(3, &[vec![1], vec![0, 2], vec![0]]),
            Err(GraphError::MalformedRotation(_))
        ));
        assert_eq!(
            PlaneGraph::from_rotation(4, &[vec![1], vec![0], vec![3], vec![2]]),
            Err(GraphError::Disconnected)
        );
    }

    #[test]
    fn cube_faces_are_quadrilaterals() {
        let g = cube();
        assert_eq!(g.face_count(), 6);
        assert!(g.faces().iter().all(|f| f.len() == 4));
    }

    #[test]
    fn dual_examples() {
        let d = k4().planar_dual();
        assert!(is_isomorphic(&d, &k4()));
        let oct = cube().planar_dual();
        assert_eq!((oct.vertex_count(), oct.edge_count(), oct.face_count()), (6, 12, 8));
        assert!(oct.is_simple());
        assert!((0..6).all(|v| oct.degree(v) == 4));
        let p = polygon_graph(4).unwrap().planar_dual();
        assert_eq!((p.vertex_count(), p.edge_count()), (2, 5));
        assert!(!p.is_simple());
    }

    #[test]
    fn double_dual_is_isomorphic() {
        for g in [k4(), cube(), polygon_graph(5).unwrap()] {
            assert!(is_isomorphic(&g.planar_dual().planar_dual(), &g));
        }
    }

    #[test]
    fn document_round_trip() {
        let p = polygon_graph(3).unwrap().planar_dual();
        let doc = p.to_document();
        let q = PlaneGraph::from_document(&doc).unwrap();
        assert!(is_isomorphic(&p, &q));
        let text = r#"{"n":3,"rotation":[[1,2],[2,0],[0,1]]}"#;
        assert_eq!(PlaneGraph::from_json(text).unwrap().face_count(), 2);
    }

    #[test]
    fn repeated_face_vertex_breaks_dual() {
        // two triangles sharing vertex 0: the outer face passes 0 twice and
        // the dual has a cut vertex
        let pts = [(0.0, 0.0), (1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)];
        let g = PlaneGraph::from_embedding(&pts, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert!(g.faces().iter().any(|f| {
            let mut vs: Vec<usize> = f.iter().map(|&d| g.origin(d)).collect();
            vs.sort_unstable();
            vs.windows(2).any(|w| w[0] == w[1])
        }));
        assert!(g.planar_dual().connectivity() < 2);
        // a bridge has the same face on both sides and becomes a loop
        let path = PlaneGraph::from_rotation(3, &[vec![1], vec![0, 2], vec![1]]).unwrap();
        let d = path.planar_dual();
        assert_eq!(d.vertex_count(), 1);
        assert!(d.neighbors(0).iter().all(|&u| u == 0));
    }
}
