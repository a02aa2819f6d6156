use std::collections::BTreeSet;

use crate::planegraph::{canonical_code_marked, CanonicalCode, PlaneGraph, PlaneGraphError, VertexType};

/// A plane graph whose faces are marked complete or incomplete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPlaneGraph {
    pub graph: PlaneGraph,
    pub complete: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartialError {
    Graph(PlaneGraphError),
    IncompleteFacesShareEdge(usize, usize),
}

impl PartialPlaneGraph {
    pub fn new(faces: Vec<Vec<usize>>, complete: Vec<bool>) -> Result<Self, PartialError> {
        let graph = PlaneGraph::build(&faces).map_err(PartialError::Graph)?;
        let p = PartialPlaneGraph { graph, complete };
        if let Some((a, b)) = p.incomplete_neighbors() {
            return Err(PartialError::IncompleteFacesShareEdge(a, b));
        }
        Ok(p)
    }

    /// A pair of incomplete faces sharing an edge, if any.
    pub fn incomplete_neighbors(&self) -> Option<(usize, usize)> {
        let g = &self.graph;
        for f in 0..g.face_count() {
            if self.complete[f] {
                continue;
            }
            let face = g.face(f);
            for j in 0..face.len() {
                let h = g.face_of_dart(face[(j + 1) % face.len()], face[j]).unwrap();
                if !self.complete[h] {
                    return Some((f, h));
                }
            }
        }
        None
    }

    pub fn incomplete_faces(&self) -> Vec<usize> {
        (0..self.complete.len()).filter(|&f| !self.complete[f]).collect()
    }

    pub fn is_terminal(&self) -> bool {
        self.complete.iter().all(|&c| c)
    }

    pub fn complete_count(&self) -> usize {
        self.complete.iter().filter(|&&c| c).count()
    }

    /// A vertex whose faces are all complete; its type can no longer change.
    pub fn is_finished(&self, v: usize) -> bool {
        self.graph.faces_at(v).iter().all(|&f| self.complete[f])
    }

    pub fn finished_types(&self) -> Vec<(usize, VertexType)> {
        (0..self.graph.vertex_count())
            .filter(|&v| self.is_finished(v))
            .map(|v| (v, self.graph.vertex_type(v).unwrap()))
            .collect()
    }

    pub fn code(&self) -> CanonicalCode {
        canonical_code_marked(&self.graph, &self.complete)
    }

    /// `I_n`: a complete `n`-gon and its incomplete opposite.
    pub fn initial_polygon(n: usize) -> PartialPlaneGraph {
        let f: Vec<usize> = (0..n).collect();
        let r: Vec<usize> = f.iter().rev().copied().collect();
        PartialPlaneGraph::new(vec![f, r], vec![true, false]).expect("n >= 3")
    }

    /// A vertex surrounded by complete faces, triangles where `arrangement`
    /// is false and quadrilaterals where it is true, inside one incomplete face.
    pub fn initial_vertex(arrangement: &[bool]) -> PartialPlaneGraph {
        let d = arrangement.len();
        let ring = |i: usize| 1 + i % d;
        let mut next = d + 1;
        let mut faces = Vec::new();
        let mut boundary = Vec::new();
        for (i, &quad) in arrangement.iter().enumerate() {
            boundary.push(ring(i));
            if quad {
                faces.push(vec![0, ring(i), next, ring(i + 1)]);
                boundary.push(next);
                next += 1;
            } else {
                faces.push(vec![0, ring(i), ring(i + 1)]);
            }
        }
        let mut complete = vec![true; faces.len()];
        boundary.reverse();
        faces.push(boundary);
        complete.push(false);
        PartialPlaneGraph::new(faces, complete).expect("seed is a plane graph")
    }
}

/// Arrangements of `p` triangles and `q` quadrilaterals around a vertex, up to
/// rotation and reflection, as the least representative of each class, sorted.
pub fn arrangements(p: usize, q: usize) -> Vec<Vec<bool>> {
    let d = p + q;
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize != q {
            continue;
        }
        let s: Vec<bool> = (0..d).map(|i| mask >> i & 1 == 1).collect();
        let mut best = s.clone();
        for r in 0..d {
            let rot: Vec<bool> = (0..d).map(|i| s[(i + r) % d]).collect();
            let rev: Vec<bool> = (0..d).map(|i| s[(r + d - i) % d]).collect();
            best = best.min(rot).min(rev);
        }
        out.insert(best);
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(3, 2).len(), 2);
        assert_eq!(arrangements(5, 0).len(), 1);
        assert_eq!(arrangements(2, 2).len(), 2);
        assert_eq!(arrangements(0, 4).len(), 1);
        assert_eq!(arrangements(1, 3).len(), 1);
        assert_eq!(arrangements(2, 3).len(), 2);
    }

    #[test]
    fn seed_states() {
        for a in arrangements(3, 2) {
            let s = PartialPlaneGraph::initial_vertex(&a);
            assert_eq!(s.complete_count(), 5);
            assert_eq!(s.incomplete_faces().len(), 1);
            assert!(s.is_finished(0));
            assert_eq!(s.graph.vertex_type(0).unwrap(), VertexType { p: 3, q: 2, r: 0 });
            assert_eq!(s.graph.face(s.incomplete_faces()[0]).len(), 7);
        }
        let [a, b] = <[Vec<bool>; 2]>::try_from(arrangements(3, 2)).unwrap();
        let (sa, sb) = (
            PartialPlaneGraph::initial_vertex(&a),
            PartialPlaneGraph::initial_vertex(&b),
        );
        assert_ne!(sa.code(), sb.code());
    }

    #[test]
    fn incomplete_neighbors_rejected() {
        let e = PartialPlaneGraph::new(vec![vec![0, 1, 2], vec![2, 1, 0]], vec![false, false]);
        assert_eq!(e.unwrap_err(), PartialError::IncompleteFacesShareEdge(0, 1));
    }
}
