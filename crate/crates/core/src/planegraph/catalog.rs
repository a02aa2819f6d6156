//! Named plane graphs used by tests, fixtures and the CLI.

use super::PlaneGraph;

fn build(faces: &[&[usize]]) -> PlaneGraph {
    let faces: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
    PlaneGraph::build(&faces).expect("catalog graph is valid")
}

pub fn tetrahedron() -> PlaneGraph {
    build(&[&[0, 1, 2], &[0, 2, 3], &[0, 3, 1], &[1, 3, 2]])
}

pub fn octahedron() -> PlaneGraph {
    build(&[
        &[2, 0, 5],
        &[2, 1, 4],
        &[3, 0, 4],
        &[3, 1, 5],
        &[4, 0, 2],
        &[4, 1, 3],
        &[5, 0, 3],
        &[5, 1, 2],
    ])
}

pub fn cube() -> PlaneGraph {
    build(&[
        &[1, 0, 4, 5],
        &[2, 0, 1, 3],
        &[3, 1, 5, 7],
        &[4, 0, 2, 6],
        &[5, 4, 6, 7],
        &[6, 2, 3, 7],
    ])
}

/// The graph of the face-centered cubic packing.
pub fn cuboctahedron() -> PlaneGraph {
    build(&[
        &[1, 9, 4, 2],
        &[3, 8, 6, 7],
        &[4, 0, 6, 10],
        &[4, 10, 2],
        &[5, 3, 7],
        &[5, 9, 1],
        &[6, 0, 7],
        &[6, 8, 10],
        &[7, 0, 9, 5],
        &[9, 0, 4],
        &[10, 8, 11, 2],
        &[11, 1, 2],
        &[11, 3, 5, 1],
        &[11, 8, 3],
    ])
}

/// The graph of the hexagonal-close packing: the twisted cuboctahedron.
pub fn hcp() -> PlaneGraph {
    build(&[
        &[0, 6, 8, 5],
        &[1, 0, 9],
        &[3, 4, 8, 7],
        &[4, 11, 5],
        &[5, 8, 4],
        &[6, 0, 1],
        &[6, 1, 2, 7],
        &[7, 2, 3],
        &[7, 8, 6],
        &[9, 0, 5, 11],
        &[10, 2, 1, 9],
        &[10, 3, 2],
        &[10, 9, 11],
        &[11, 4, 3, 10],
    ])
}

pub fn icosahedron() -> PlaneGraph {
    build(&[
        &[1, 0, 2],
        &[1, 8, 3],
        &[2, 0, 6],
        &[2, 8, 1],
        &[3, 8, 9],
        &[4, 2, 6],
        &[4, 8, 2],
        &[5, 0, 7],
        &[5, 10, 6],
        &[6, 0, 5],
        &[6, 10, 4],
        &[7, 0, 1],
        &[7, 1, 3],
        &[7, 3, 11],
        &[7, 11, 5],
        &[9, 8, 4],
        &[10, 9, 4],
        &[11, 3, 9],
        &[11, 9, 10],
        &[11, 10, 5],
    ])
}

/// Pentahedral prism: two poles, each joined to a pentagonal ring, the rings
/// joined by quadrilaterals.
pub fn gpent() -> PlaneGraph {
    build(&[
        &[1, 8, 7],
        &[2, 0, 6],
        &[3, 0, 2],
        &[4, 0, 3],
        &[4, 3, 8, 9],
        &[5, 0, 4],
        &[5, 4, 9, 10],
        &[6, 0, 5],
        &[6, 5, 10, 11],
        &[7, 8, 3, 2],
        &[9, 8, 1],
        &[10, 1, 11],
        &[10, 9, 1],
        &[11, 1, 7],
        &[11, 7, 2, 6],
    ])
}

/// Two faces `(0,...,n-1)` and its reverse.
pub fn two_face(n: usize) -> PlaneGraph {
    let f: Vec<usize> = (0..n).collect();
    let r: Vec<usize> = f.iter().rev().copied().collect();
    PlaneGraph::build(&[f, r]).expect("n >= 3")
}

/// Prism over an `n`-gon: two `n`-gons and `n` quadrilaterals.
pub fn prism(n: usize) -> PlaneGraph {
    let mut faces = vec![(0..n).collect::<Vec<_>>(), (0..n).rev().map(|i| i + n).collect()];
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(vec![j, i, i + n, j + n]);
    }
    PlaneGraph::build(&faces).expect("n >= 3")
}

/// Pyramid over an `n`-gon.
pub fn pyramid(n: usize) -> PlaneGraph {
    let mut faces = vec![(0..n).rev().collect::<Vec<_>>()];
    for i in 0..n {
        faces.push(vec![i, (i + 1) % n, n]);
    }
    PlaneGraph::build(&faces).expect("n >= 3")
}

pub fn all() -> Vec<(&'static str, PlaneGraph)> {
    vec![
        ("tetrahedron", tetrahedron()),
        ("octahedron", octahedron()),
        ("cube", cube()),
        ("cuboctahedron", cuboctahedron()),
        ("hcp", hcp()),
        ("icosahedron", icosahedron()),
        ("gpent", gpent()),
    ]
}

pub fn by_name(name: &str) -> Option<PlaneGraph> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}
