use std::collections::BTreeSet;

use super::PlaneGraph;

/// A simple cycle in the vertex graph and the two face sets it separates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    /// Starts at the smallest vertex; the second vertex is smaller than the last.
    pub vertices: Vec<usize>,
    /// `sides[0]` holds the face to the left of the first edge.
    pub sides: [Vec<usize>; 2],
}

impl Circuit {
    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().copied().collect()
    }

    /// Vertices of faces on `side` that are not on the circuit.
    pub fn enclosed(&self, g: &PlaneGraph, side: usize) -> BTreeSet<usize> {
        let on: BTreeSet<usize> = self.vertex_set();
        self.sides[side]
            .iter()
            .flat_map(|&f| g.face(f).iter().copied())
            .filter(|v| !on.contains(v))
            .collect()
    }
}

/// All `n`-circuits for `n <= 4`.
pub fn circuits(g: &PlaneGraph, n: usize) -> Vec<Circuit> {
    circuits_capped(g, n, 4).expect("n within default cap")
}

/// All `n`-circuits; `None` when `n` exceeds `cap` or is below 3.
pub fn circuits_capped(g: &PlaneGraph, n: usize, cap: usize) -> Option<Vec<Circuit>> {
    if n < 3 || n > cap {
        return None;
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    for s in 0..g.vertex_count() {
        path.clear();
        path.push(s);
        extend(g, n, &mut path, &mut out);
    }
    Some(out)
}

fn extend(g: &PlaneGraph, n: usize, path: &mut Vec<usize>, out: &mut Vec<Circuit>) {
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() == n {
        if g.has_edge(last, s) && path[1] < last {
            let vertices = path.clone();
            let sides = split(g, &vertices);
            out.push(Circuit { vertices, sides });
        }
        return;
    }
    let mut next: Vec<usize> = g.neighbors(last).to_vec();
    next.sort_unstable();
    for w in next {
        if w > s && !path.contains(&w) {
            path.push(w);
            extend(g, n, path, out);
            path.pop();
        }
    }
}

/// Connected components of the dual graph with the circuit's edges removed.
fn split(g: &PlaneGraph, cyc: &[usize]) -> [Vec<usize>; 2] {
    let k = cyc.len();
    let cut: BTreeSet<(usize, usize)> = (0..k)
        .flat_map(|i| {
            let (a, b) = (cyc[i], cyc[(i + 1) % k]);
            [(a, b), (b, a)]
        })
        .collect();
    let start = g.face_of_dart(cyc[0], cyc[1]).unwrap();
    let mut side = vec![false; g.face_count()];
    side[start] = true;
    let mut stack = vec![start];
    while let Some(f) = stack.pop() {
        let face = g.face(f);
        for j in 0..face.len() {
            let (a, b) = (face[j], face[(j + 1) % face.len()]);
            if cut.contains(&(a, b)) {
                continue;
            }
            let h = g.face_of_dart(b, a).unwrap();
            if !side[h] {
                side[h] = true;
                stack.push(h);
            }
        }
    }
    let left = (0..g.face_count()).filter(|&f| side[f]).collect();
    let right = (0..g.face_count()).filter(|&f| !side[f]).collect();
    [left, right]
}

#[cfg(test)]
mod tests {
    use super::super::catalog;
    use super::*;

    #[test]
    fn tetrahedron_triangles() {
        let g = catalog::tetrahedron();
        let c = circuits(&g, 3);
        assert_eq!(c.len(), 4);
        for ci in &c {
            let small = ci.sides.iter().map(|s| s.len()).min().unwrap();
            assert_eq!(small, 1);
        }
    }

    #[test]
    fn sides_partition_faces() {
        let g = catalog::cuboctahedron();
        for c in circuits(&g, 4) {
            let mut all: Vec<usize> = c.sides[0].iter().chain(&c.sides[1]).copied().collect();
            all.sort();
            assert_eq!(all, (0..g.face_count()).collect::<Vec<_>>());
            assert!(!c.sides[0].is_empty() && !c.sides[1].is_empty());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = catalog::cube();
        assert!(circuits_capped(&g, 5, 4).is_none());
        assert!(!circuits_capped(&g, 6, 6).unwrap().is_empty());
    }
}
