use serde::Serialize;

use super::PlaneGraph;
use crate::error::GraphError;

/// Vertex cap for exact Hamiltonian-cycle backtracking.
pub const HAMILTONIAN_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphClassification {
    pub is_simple: bool,
    /// Vertex connectivity, saturated at 3.
    pub k_connectivity: usize,
    pub outerplanar_face: Option<usize>,
    pub hamiltonian_cycles: Vec<Vec<usize>>,
    pub is_polyhedral: bool,
}

fn connected_without(adj: &[Vec<usize>], removed: &[bool]) -> bool {
    let n = adj.len();
    let Some(start) = (0..n).find(|&v| !removed[v]) else {
        return true;
    };
    let mut seen = removed.to_vec();
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn k_connected(adj: &[Vec<usize>], k: usize) -> bool {
    let n = adj.len();
    if n <= k {
        return false;
    }
    // every (k-1)-subset, lexicographically
    let r = k - 1;
    let mut idx: Vec<usize> = (0..r).collect();
    let mut removed = vec![false; n];
    loop {
        for &i in &idx {
            removed[i] = true;
        }
        let ok = connected_without(adj, &removed);
        for &i in &idx {
            removed[i] = false;
        }
        if !ok {
            return false;
        }
        let mut i = r;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn hamiltonian(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut on = vec![false; n];
    let mut path = vec![0];
    on[0] = true;
    fn go(adj: &[Vec<usize>], on: &mut [bool], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = adj.len();
        let v = *path.last().unwrap();
        if path.len() == n {
            if adj[v].contains(&0) && path[1] < v {
                out.push(path.clone());
            }
            return;
        }
        for &u in &adj[v] {
            if !on[u] {
                on[u] = true;
                path.push(u);
                go(adj, on, path, out);
                path.pop();
                on[u] = false;
            }
        }
    }
    go(adj, &mut on, &mut path, &mut out);
    out
}

impl PlaneGraph {
    /// True iff the graph has more than `k` vertices and stays connected after
    /// deleting any `k - 1` of them.
    pub fn is_k_connected(&self, k: usize) -> Result<bool, GraphError> {
        if k == 0 {
            return Err(GraphError::UnsupportedOrder(k));
        }
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        Ok(k_connected(&self.simple_adjacency(), k))
    }

    /// Connectivity of the underlying simple graph, saturated at 3.
    pub fn connectivity(&self) -> usize {
        let adj = self.simple_adjacency();
        (1..=3).take_while(|&k| k_connected(&adj, k)).last().unwrap_or(0)
    }

    /// Lowest face id whose boundary visits every vertex.
    pub fn outerplanar_face(&self) -> Option<usize> {
        (0..self.face_count()).find(|&f| {
            let mut seen = vec![false; self.vertex_count()];
            for v in self.face_vertices(f) {
                seen[v] = true;
            }
            seen.iter().all(|&s| s)
        })
    }

    /// All Hamiltonian cycles, each listed once: it starts at vertex 0 and its
    /// second vertex is smaller than its last.
    pub fn hamiltonian_cycles(&self) -> Result<Vec<Vec<usize>>, GraphError> {
        self.hamiltonian_cycles_capped(HAMILTONIAN_CAP)
    }

    pub fn hamiltonian_cycles_capped(&self, cap: usize) -> Result<Vec<Vec<usize>>, GraphError> {
        if self.vertex_count() > cap {
            return Err(GraphError::TooLarge { n: self.vertex_count(), cap });
        }
        Ok(hamiltonian(&self.simple_adjacency()))
    }

    pub fn classify(&self) -> Result<GraphClassification, GraphError> {
        self.classify_capped(HAMILTONIAN_CAP)
    }

    pub fn classify_capped(&self, cap: usize) -> Result<GraphClassification, GraphError> {
        let is_simple = self.is_simple();
        let k = self.connectivity();
        Ok(GraphClassification {
            is_simple,
            k_connectivity: k,
            outerplanar_face: self.outerplanar_face(),
            hamiltonian_cycles: self.hamiltonian_cycles_capped(cap)?,
            is_polyhedral: is_simple && k >= 3,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::polygon_graph;
    use super::*;

    fn k4() -> PlaneGraph {
        PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
            .unwrap()
    }

    fn square_chord() -> PlaneGraph {
        PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![2, 0], vec![3, 0, 1], vec![0, 2]]).unwrap()
    }

    #[test]
    fn connectivity_examples() {
        assert!(k4().is_k_connected(3).unwrap());
        assert!(!square_chord().is_k_connected(3).unwrap());
        assert!(square_chord().is_k_connected(2).unwrap());
        let pts = [(0.0, 0.0), (1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)];
        let bowtie =
            PlaneGraph::from_embedding(&pts, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert!(!bowtie.is_k_connected(2).unwrap());
        assert_eq!(bowtie.connectivity(), 1);
        let dual = polygon_graph(3).unwrap().planar_dual();
        assert_eq!(dual.is_k_connected(2), Err(GraphError::NotSimple));
    }

    #[test]
    fn outerplanar_examples() {
        let g = square_chord();
        let f = g.outerplanar_face().unwrap();
        assert_eq!(g.faces()[f].len(), 4);
        assert_eq!(k4().outerplanar_face(), None);
        assert_eq!(polygon_graph(3).unwrap().outerplanar_face(), Some(0));
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(k4().hamiltonian_cycles().unwrap().len(), 3);
        assert_eq!(square_chord().hamiltonian_cycles().unwrap(), vec![vec![0, 1, 2, 3]]);
        let star = PlaneGraph::from_rotation(4, &[vec![1, 2, 3], vec![0], vec![0], vec![0]]).unwrap();
        assert!(star.hamiltonian_cycles().unwrap().is_empty());
        let big = polygon_graph(17).unwrap();
        assert_eq!(big.hamiltonian_cycles(), Err(GraphError::TooLarge { n: 18, cap: 16 }));
    }

    #[test]
    fn classification_of_k4() {
        let c = k4().classify().unwrap();
        assert!(c.is_simple && c.is_polyhedral);
        assert_eq!(c.k_connectivity, 3);
    }
}
