use crate::error::GraphError;
use crate::graph::PlaneGraph;

/// A triangulation of the sphere containing the original graph.
#[derive(Debug, Clone)]
pub struct Augmented {
    pub graph: PlaneGraph,
    /// `true` for vertices that were added.
    pub added: Vec<bool>,
    /// For each face of the original graph, the added vertex at its center.
    pub face_center: Vec<usize>,
}

/// Adds a vertex inside every face. When a face boundary repeats a vertex, a
/// ring of extra vertices (one per boundary dart) is placed between the
/// boundary and the center so that the result stays simple.
pub fn augment_to_triangulation(g: &PlaneGraph) -> Result<Augmented, GraphError> {
    if !g.is_simple() {
        return Err(GraphError::NotSimple);
    }
    let n = g.vertex_count();
    if g.edge_count() < 2 {
        return Err(GraphError::MalformedRotation(
            "augmentation needs at least two edges".into(),
        ));
    }
    let m = g.dart_count();
    // position of each dart on its face boundary
    let mut slot = vec![0; m];
    for f in g.faces() {
        for (j, &d) in f.iter().enumerate() {
            slot[d] = j;
        }
    }
    let mut next_id = n;
    let mut face_center = Vec::with_capacity(g.face_count());
    // ring[f][j]: the ring vertex along boundary dart j of face f
    let mut ring: Vec<Option<Vec<usize>>> = Vec::with_capacity(g.face_count());
    for f in 0..g.face_count() {
        let mut vs = g.face_vertices(f);
        vs.sort_unstable();
        let repeats = vs.windows(2).any(|w| w[0] == w[1]);
        if repeats {
            let k = g.faces()[f].len();
            ring.push(Some((next_id..next_id + k).collect()));
            next_id += k;
        } else {
            ring.push(None);
        }
        face_center.push(next_id);
        next_id += 1;
    }
    let total = next_id;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); total];
    for v in 0..n {
        for &d in g.darts_at(v) {
            rot[v].push(g.target(d));
            let f = g.face_of(d);
            match &ring[f] {
                None => rot[v].push(face_center[f]),
                Some(w) => {
                    let k = w.len();
                    let j = slot[d];
                    rot[v].push(w[j]);
                    rot[v].push(w[(j + k - 1) % k]);
                }
            }
        }
    }
    for f in 0..g.face_count() {
        let c = face_center[f];
        let darts = &g.faces()[f];
        match &ring[f] {
            None => rot[c] = darts.iter().map(|&d| g.origin(d)).collect(),
            Some(w) => {
                let k = w.len();
                rot[c] = w.clone();
                for j in 0..k {
                    let d = darts[j];
                    rot[w[j]] = vec![g.target(d), w[(j + 1) % k], c, w[(j + k - 1) % k], g.origin(d)];
                }
            }
        }
    }
    let graph = PlaneGraph::from_rotation(total, &rot)?;
    let added = (0..total).map(|v| v >= n).collect();
    Ok(Augmented {
        graph,
        added,
        face_center,
    })
}
