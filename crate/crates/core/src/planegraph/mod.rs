//! Plane graphs as sets of oriented face cycles.

mod archive;
mod canon;
pub mod catalog;
mod circuits;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use archive::{archive_diff, parse_graph_line, Archive, ArchiveDiff, ArchiveError};
pub use canon::{
    canonical_code, canonical_code_marked, canonical_form, isomorphic, isomorphic_by_invariants,
    CanonicalCode, Orientation,
};
pub use circuits::{circuits, circuits_capped, Circuit};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PlaneGraphError {
    #[error("face {face} has length {len}; faces need at least 3 vertices")]
    FaceTooShort { face: usize, len: usize },
    #[error("face {face} repeats vertex {vertex}")]
    RepeatedVertex { face: usize, vertex: usize },
    #[error("directed edge {0}->{1} is not paired: it occurs twice or its reverse is missing")]
    EdgeNotPaired(usize, usize),
    #[error("faces around vertex {0} do not form a single cyclic orbit")]
    BadVertexOrbit(usize),
    #[error("Euler's formula fails: V - E + F = {0}")]
    EulerViolation(i64),
    #[error("the graph is not connected")]
    Disconnected,
    #[error("the graph has no faces")]
    Empty,
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
}

/// Counts of triangles, quadrilaterals and faces of length at least 5 at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexType {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl VertexType {
    pub fn degree(&self) -> u32 {
        self.p + self.q + self.r
    }
}

/// A validated plane graph. Vertices are `0..vertex_count()`.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    faces: Vec<Vec<usize>>,
    n: usize,
    dart_face: HashMap<(usize, usize), usize>,
    /// Neighbors of each vertex in rotation order.
    rot: Vec<Vec<usize>>,
    /// Faces containing each vertex, in the same cyclic order as `rot`:
    /// `faces_at[v][i]` contains the dart `v -> rot[v][i]`.
    faces_at: Vec<Vec<usize>>,
}

impl PartialEq for PlaneGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.faces == other.faces
    }
}

impl Eq for PlaneGraph {}

impl PlaneGraph {
    /// Validates the face cycles. Vertex ids with gaps are compacted in
    /// increasing order.
    pub fn build(faces: &[Vec<usize>]) -> Result<PlaneGraph, PlaneGraphError> {
        if faces.is_empty() {
            return Err(PlaneGraphError::Empty);
        }
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(PlaneGraphError::FaceTooShort { face: i, len: f.len() });
            }
            let mut seen = BTreeSet::new();
            for &v in f {
                if !seen.insert(v) {
                    return Err(PlaneGraphError::RepeatedVertex { face: i, vertex: v });
                }
            }
        }
        let ids: BTreeSet<usize> = faces.iter().flatten().copied().collect();
        let remap: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let faces: Vec<Vec<usize>> = faces
            .iter()
            .map(|f| f.iter().map(|v| remap[v]).collect())
            .collect();
        Self::build_dense(faces, ids.len())
    }

    fn build_dense(faces: Vec<Vec<usize>>, n: usize) -> Result<PlaneGraph, PlaneGraphError> {
        let mut dart_face = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for j in 0..f.len() {
                let d = (f[j], f[(j + 1) % f.len()]);
                if dart_face.insert(d, i).is_some() {
                    return Err(PlaneGraphError::EdgeNotPaired(d.0, d.1));
                }
            }
        }
        let mut darts: Vec<&(usize, usize)> = dart_face.keys().collect();
        darts.sort();
        for &&(a, b) in &darts {
            if !dart_face.contains_key(&(b, a)) {
                return Err(PlaneGraphError::EdgeNotPaired(a, b));
            }
        }

        let mut first_out: Vec<Option<usize>> = vec![None; n];
        let mut incidence = vec![0usize; n];
        for f in &faces {
            for j in 0..f.len() {
                incidence[f[j]] += 1;
                first_out[f[j]].get_or_insert(f[(j + 1) % f.len()]);
            }
        }
        let mut rot = vec![Vec::new(); n];
        let mut faces_at = vec![Vec::new(); n];
        for v in 0..n {
            let w0 = first_out[v].expect("every vertex lies on a face");
            let mut w = w0;
            loop {
                rot[v].push(w);
                faces_at[v].push(dart_face[&(v, w)]);
                let back = dart_face[&(w, v)];
                w = succ_in(&faces[back], v);
                if w == w0 || rot[v].len() > incidence[v] {
                    break;
                }
            }
            if rot[v].len() != incidence[v] {
                return Err(PlaneGraphError::BadVertexOrbit(v));
            }
        }

        let e = dart_face.len() / 2;
        let chi = n as i64 - e as i64 + faces.len() as i64;
        if chi != 2 {
            return Err(PlaneGraphError::EulerViolation(chi));
        }
        let g = PlaneGraph {
            faces,
            n,
            dart_face,
            rot,
            faces_at,
        };
        if !g.is_connected() {
            return Err(PlaneGraphError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.rot[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.dart_face.len() / 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Neighbors of `v` in rotation order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    /// Faces containing `v`; entry `i` holds the dart `v -> neighbors(v)[i]`.
    pub fn faces_at(&self, v: usize) -> &[usize] {
        &self.faces_at[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.dart_face.contains_key(&(u, v))
    }

    /// Face containing the directed edge `u -> v`.
    pub fn face_of_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.dart_face.get(&(u, v)).copied()
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .dart_face
            .keys()
            .filter(|(a, b)| a < b)
            .copied()
            .collect();
        e.sort();
        e
    }

    /// Next neighbor of `v` after `w` in rotation order.
    pub fn rotate_next(&self, v: usize, w: usize) -> usize {
        succ_in(&self.faces[self.dart_face[&(w, v)]], v)
    }

    /// Previous neighbor of `v` before `w` in rotation order.
    pub fn rotate_prev(&self, v: usize, w: usize) -> usize {
        pred_in(&self.faces[self.dart_face[&(v, w)]], v)
    }

    pub fn vertex_type(&self, v: usize) -> Result<VertexType, PlaneGraphError> {
        if v >= self.n {
            return Err(PlaneGraphError::UnknownVertex(v));
        }
        let mut t = VertexType { p: 0, q: 0, r: 0 };
        for &f in &self.faces_at[v] {
            match self.faces[f].len() {
                3 => t.p += 1,
                4 => t.q += 1,
                _ => t.r += 1,
            }
        }
        Ok(t)
    }

    /// Reverses every face cycle.
    pub fn opposite(&self) -> PlaneGraph {
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().rev().copied().collect())
            .collect();
        Self::build_dense(faces, self.n).expect("opposite of a plane graph is a plane graph")
    }

    /// Applies `perm[v]` to every vertex.
    pub fn relabel(&self, perm: &[usize]) -> PlaneGraph {
        let faces: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::build_dense(faces, self.n).expect("relabeling is a bijection")
    }

    /// Rotates each face to start at its smallest vertex and sorts the faces.
    pub fn normalized(&self) -> PlaneGraph {
        let mut faces: Vec<Vec<usize>> = self.faces.iter().map(|f| rotate_to_min(f)).collect();
        faces.sort();
        Self::build_dense(faces, self.n).expect("same faces")
    }

    /// `F1;F2;...` with space separated vertices.
    pub fn to_line(&self) -> String {
        self.faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Vertices that lie on a face of length at least 5.
    pub fn on_exceptional_face(&self, v: usize) -> bool {
        self.faces_at[v].iter().any(|&f| self.faces[f].len() >= 5)
    }

    /// Vertex sets of faces, for membership tests.
    pub fn face_vertex_sets(&self) -> Vec<BTreeSet<usize>> {
        self.faces.iter().map(|f| f.iter().copied().collect()).collect()
    }
}

pub(crate) fn succ_in(face: &[usize], v: usize) -> usize {
    let i = face.iter().position(|&x| x == v).expect("vertex on face");
    face[(i + 1) % face.len()]
}

pub(crate) fn pred_in(face: &[usize], v: usize) -> usize {
    let i = face.iter().position(|&x| x == v).expect("vertex on face");
    face[(i + face.len() - 1) % face.len()]
}

pub fn rotate_to_min(f: &[usize]) -> Vec<usize> {
    let i = (0..f.len()).min_by_key(|&i| f[i]).unwrap_or(0);
    f[i..].iter().chain(&f[..i]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::catalog;
    use super::*;

    #[test]
    fn tetrahedron_counts() {
        let g = catalog::tetrahedron();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (4, 6, 4));
        for v in 0..4 {
            assert_eq!(g.vertex_type(v).unwrap(), VertexType { p: 3, q: 0, r: 0 });
        }
    }

    #[test]
    fn two_face_graph_is_valid() {
        let g = PlaneGraph::build(&[vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (3, 3, 2));
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn duplicate_orientation_rejected() {
        let e = PlaneGraph::build(&[vec![0, 1, 2], vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(e, PlaneGraphError::EdgeNotPaired(..)));
    }

    #[test]
    fn missing_reverse_rejected() {
        let e = PlaneGraph::build(&[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1]]).unwrap_err();
        assert!(matches!(e, PlaneGraphError::EdgeNotPaired(..)));
    }

    #[test]
    fn pinched_vertex_rejected() {
        // Two triangle spheres glued at vertex 0.
        let faces = vec![
            vec![0, 1, 2],
            vec![2, 1, 0],
            vec![0, 3, 4],
            vec![4, 3, 0],
        ];
        assert_eq!(
            PlaneGraph::build(&faces).unwrap_err(),
            PlaneGraphError::BadVertexOrbit(0)
        );
    }

    #[test]
    fn disjoint_spheres_violate_euler() {
        let faces = vec![vec![0, 1, 2], vec![2, 1, 0], vec![3, 4, 5], vec![5, 4, 3]];
        assert_eq!(
            PlaneGraph::build(&faces).unwrap_err(),
            PlaneGraphError::EulerViolation(4)
        );
    }

    #[test]
    fn torus_violates_euler() {
        // 3x3 grid on a torus, all quads.
        let id = |i: usize, j: usize| (i % 3) * 3 + (j % 3);
        let mut faces = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                faces.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        assert_eq!(
            PlaneGraph::build(&faces).unwrap_err(),
            PlaneGraphError::EulerViolation(0)
        );
    }

    #[test]
    fn gaps_are_compacted() {
        let g = PlaneGraph::build(&[vec![10, 20, 30], vec![30, 20, 10]]).unwrap();
        assert_eq!(g.faces(), &[vec![0, 1, 2], vec![2, 1, 0]]);
    }

    #[test]
    fn opposite_is_involution() {
        let g = catalog::cuboctahedron();
        assert_eq!(g.opposite().opposite(), g);
        assert_eq!(g.opposite().edge_count(), g.edge_count());
    }

    #[test]
    fn rotation_next_prev_inverse() {
        let g = catalog::icosahedron();
        for v in 0..g.vertex_count() {
            for &w in g.neighbors(v) {
                assert_eq!(g.rotate_prev(v, g.rotate_next(v, w)), w);
            }
        }
    }

    #[test]
    fn named_vertex_types() {
        let c = catalog::cuboctahedron();
        let i = catalog::icosahedron();
        for v in 0..12 {
            assert_eq!(c.vertex_type(v).unwrap(), VertexType { p: 2, q: 2, r: 0 });
            assert_eq!(i.vertex_type(v).unwrap(), VertexType { p: 5, q: 0, r: 0 });
        }
        assert!(c.vertex_type(12).is_err());
    }
}
