//! Canonical codes for embedded graphs.
//!
//! For every directed edge and both orientations the graph is relabeled by a
//! breadth-first walk of the rotation system, in the style of plantri: each
//! vertex lists its neighbors in rotation order, starting at the neighbor it
//! was reached from, followed by a zero. The least encoding over all starts is
//! the code. Reversing the rotation is the same as passing to the opposite
//! graph, so a graph and its opposite share one code.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::PlaneGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Proper,
    Improper,
}

/// Equality and ordering compare `bytes` only.
#[derive(Debug, Clone)]
pub struct CanonicalCode {
    pub bytes: Vec<u8>,
    pub orientation_class: Orientation,
}

impl PartialEq for CanonicalCode {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for CanonicalCode {}

impl std::hash::Hash for CanonicalCode {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bytes.hash(state)
    }
}

impl PartialOrd for CanonicalCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

impl CanonicalCode {
    pub fn hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

struct Walk {
    code: Vec<u16>,
    label: Vec<usize>,
}

/// Runs the labeling walk from dart `v -> w`. Aborts with `None` as soon as
/// the partial code exceeds `best`.
fn walk(
    g: &PlaneGraph,
    v: usize,
    w: usize,
    proper: bool,
    mark: &dyn Fn(usize) -> u16,
    best: Option<&[u16]>,
) -> Option<Walk> {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut first = vec![usize::MAX; n];
    label[v] = 1;
    order.push(v);
    first[v] = w;
    let mut code: Vec<u16> = Vec::with_capacity(2 * g.edge_count() + n);
    let mut tight = best.is_some();
    let push = |code: &mut Vec<u16>, x: u16, tight: &mut bool| -> bool {
        let i = code.len();
        code.push(x);
        if *tight {
            let b = best.unwrap();
            match x.cmp(&b[i]) {
                Ordering::Less => *tight = false,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        true
    };
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let start = first[u];
        let mut x = start;
        for _ in 0..g.degree(u) {
            if label[x] == usize::MAX {
                label[x] = order.len() + 1;
                order.push(x);
                first[x] = u;
            }
            let f = g.face_of_dart(u, x).unwrap();
            // Face marks are read off the face on the same side of the dart
            // in both orientations.
            let f = if proper { f } else { g.face_of_dart(x, u).unwrap() };
            let sym = (label[x] as u16) * 2 + mark(f);
            if !push(&mut code, sym, &mut tight) {
                return None;
            }
            x = if proper { g.rotate_next(u, x) } else { g.rotate_prev(u, x) };
        }
        if !push(&mut code, 0, &mut tight) {
            return None;
        }
    }
    Some(Walk { code, label })
}

/// Code plus the labeling (`label[v]` is 1-based) that realizes it.
fn minimize(g: &PlaneGraph, mark: &dyn Fn(usize) -> u16) -> (Vec<u16>, Vec<usize>, Orientation) {
    let mut best: Option<(Vec<u16>, Vec<usize>, Orientation)> = None;
    for proper in [true, false] {
        for v in 0..g.vertex_count() {
            for &w in g.neighbors(v) {
                let r = walk(g, v, w, proper, mark, best.as_ref().map(|b| b.0.as_slice()));
                if let Some(wk) = r {
                    let better = match &best {
                        None => true,
                        Some(b) => wk.code < b.0,
                    };
                    if better {
                        let o = if proper {
                            Orientation::Proper
                        } else {
                            Orientation::Improper
                        };
                        best = Some((wk.code, wk.label, o));
                    }
                }
            }
        }
    }
    best.expect("graph has at least one edge")
}

fn to_code(words: &[u16], n: usize, o: Orientation) -> CanonicalCode {
    let mut bytes = Vec::with_capacity(2 * words.len() + 2);
    bytes.extend_from_slice(&(n as u16).to_be_bytes());
    for w in words {
        bytes.extend_from_slice(&w.to_be_bytes());
    }
    CanonicalCode {
        bytes,
        orientation_class: o,
    }
}

pub fn canonical_code(g: &PlaneGraph) -> CanonicalCode {
    let (words, _, o) = minimize(g, &|_| 0);
    to_code(&words, g.vertex_count(), o)
}

/// Code of a graph whose faces carry a one-bit mark.
pub fn canonical_code_marked(g: &PlaneGraph, marked: &[bool]) -> CanonicalCode {
    let (words, _, o) = minimize(g, &|f| marked[f] as u16);
    to_code(&words, g.vertex_count(), o)
}

/// The canonical representative: the graph relabeled by the minimizing walk
/// (passing to the opposite graph when that walk was improper), normalized.
pub fn canonical_form(g: &PlaneGraph) -> (CanonicalCode, PlaneGraph) {
    let (words, label, o) = minimize(g, &|_| 0);
    let perm: Vec<usize> = label.iter().map(|l| l - 1).collect();
    let h = match o {
        Orientation::Proper => g.relabel(&perm),
        Orientation::Improper => g.opposite().relabel(&perm),
    };
    (to_code(&words, g.vertex_count(), o), h.normalized())
}

/// True when `g` is properly isomorphic to `h` or to its opposite.
pub fn isomorphic(g: &PlaneGraph, h: &PlaneGraph) -> bool {
    g.vertex_count() == h.vertex_count()
        && g.face_count() == h.face_count()
        && canonical_code(g) == canonical_code(h)
}

/// Invariant of a vertex: the cyclic sequence of face lengths around it,
/// minimized over rotations and reflections.
fn vertex_invariant(g: &PlaneGraph, v: usize) -> Vec<usize> {
    let lens: Vec<usize> = g.faces_at(v).iter().map(|&f| g.face(f).len()).collect();
    let k = lens.len();
    let fwd = (0..k).map(|s| (0..k).map(|i| lens[(s + i) % k]).collect::<Vec<_>>());
    let rev = (0..k).map(|s| (0..k).map(|i| lens[(s + k - i) % k]).collect::<Vec<_>>());
    fwd.chain(rev).min().unwrap_or_default()
}

/// Tries to extend `v0 -> x0`, `w0 -> y0` to a proper isomorphism.
fn try_map(g: &PlaneGraph, h: &PlaneGraph, v0: usize, w0: usize, x0: usize, y0: usize) -> bool {
    let n = g.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[v0] = x0;
    used[x0] = true;
    let mut stack = vec![(v0, w0, x0, y0)];
    let mut done = vec![false; n];
    while let Some((v, w, x, y)) = stack.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        if g.degree(v) != h.degree(x) {
            return false;
        }
        let (mut a, mut b) = (w, y);
        for _ in 0..g.degree(v) {
            if map[a] == usize::MAX {
                if used[b] {
                    return false;
                }
                map[a] = b;
                used[b] = true;
            } else if map[a] != b {
                return false;
            }
            if !done[a] {
                stack.push((a, v, b, x));
            }
            a = g.rotate_next(v, a);
            b = h.rotate_next(x, b);
        }
    }
    if map.contains(&usize::MAX) {
        return false;
    }
    let mut gf: Vec<Vec<usize>> = g
        .faces()
        .iter()
        .map(|f| super::rotate_to_min(&f.iter().map(|&v| map[v]).collect::<Vec<_>>()))
        .collect();
    let mut hf: Vec<Vec<usize>> = h.faces().iter().map(|f| super::rotate_to_min(f)).collect();
    gf.sort();
    hf.sort();
    gf == hf
}

/// Isomorphism test that does not use canonical codes: vertex invariants
/// select candidate images of one dart, and the rotation system propagates the
/// map from there. Used to cross-check [`isomorphic`].
pub fn isomorphic_by_invariants(g: &PlaneGraph, h: &PlaneGraph) -> bool {
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.face_count() != h.face_count()
    {
        return false;
    }
    let count = |x: &PlaneGraph| {
        let mut m: HashMap<Vec<usize>, usize> = HashMap::new();
        for v in 0..x.vertex_count() {
            *m.entry(vertex_invariant(x, v)).or_default() += 1;
        }
        m
    };
    let gi = count(g);
    if gi != count(h) {
        return false;
    }
    // Anchor at a vertex with the rarest invariant.
    let v0 = (0..g.vertex_count())
        .min_by_key(|&v| gi[&vertex_invariant(g, v)])
        .unwrap();
    let inv0 = vertex_invariant(g, v0);
    let w0 = g.neighbors(v0)[0];
    for hh in [h.clone(), h.opposite()] {
        for x in 0..hh.vertex_count() {
            if vertex_invariant(&hh, x) != inv0 {
                continue;
            }
            for &y in hh.neighbors(x) {
                if try_map(g, &hh, v0, w0, x, y) {
                    return true;
                }
            }
        }
    }
    false
}
