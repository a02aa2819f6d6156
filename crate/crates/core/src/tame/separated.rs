use std::collections::BTreeSet;

use crate::planegraph::PlaneGraph;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeparatedSet {
    pub vertices: BTreeSet<usize>,
}

/// Degree-5 vertices lying on an exceptional face.
pub fn candidates(g: &PlaneGraph) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| g.degree(v) == 5 && g.on_exceptional_face(v))
        .collect()
}

fn share_quad(g: &PlaneGraph, u: usize, v: usize) -> bool {
    g.faces_at(u)
        .iter()
        .any(|&f| g.face(f).len() == 4 && g.face(f).contains(&v))
}

/// Whether `u` and `v` may not both belong to a separated set.
pub fn conflict(g: &PlaneGraph, u: usize, v: usize) -> bool {
    g.has_edge(u, v) || share_quad(g, u, v)
}

/// Every separated set, the empty set included, in lexicographic order of
/// sorted member lists.
pub fn separated_sets(g: &PlaneGraph) -> Vec<SeparatedSet> {
    let cand = candidates(g);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    grow(g, &cand, 0, &mut cur, &mut out);
    out.sort();
    out
}

fn grow(g: &PlaneGraph, cand: &[usize], from: usize, cur: &mut Vec<usize>, out: &mut Vec<SeparatedSet>) {
    out.push(SeparatedSet {
        vertices: cur.iter().copied().collect(),
    });
    for i in from..cand.len() {
        let v = cand[i];
        if cur.iter().all(|&u| !conflict(g, u, v)) {
            cur.push(v);
            grow(g, cand, i + 1, cur, out);
            cur.pop();
        }
    }
}
