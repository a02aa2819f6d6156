//! Patches: the ways of carving one new complete face out of an incomplete one.
//!
//! An incomplete face `F = (b_0, ..., b_{n-1})` is replaced by a new complete
//! face `F2` plus the incomplete faces left between `F2` and the boundary of
//! `F`. `F2` walks some arcs of the boundary in order. Consecutive arcs are
//! joined by bridges through `p >= 0` new vertices. The region between a
//! bridge and the boundary becomes an incomplete gap face.

use std::collections::HashMap;
use std::sync::RwLock;

use super::partial::PartialPlaneGraph;

/// A vertex of a patch: a boundary position or the `k`-th new vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pv {
    Ring(usize),
    New(usize),
}

/// A patch for a boundary of length `ring`, with `F2` containing the dart
/// `b_0 -> b_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Patch {
    pub ring: usize,
    pub f2: Vec<Pv>,
    pub gaps: Vec<Vec<Pv>>,
    pub new_vertices: usize,
}

impl Patch {
    pub fn is_completion(&self) -> bool {
        self.gaps.is_empty()
    }

    /// Chords: bridges with no new vertex, as boundary position pairs.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        let k = self.f2.len();
        (0..k)
            .filter_map(|i| match (self.f2[i], self.f2[(i + 1) % k]) {
                (Pv::Ring(a), Pv::Ring(b)) if b != (a + 1) % self.ring => Some((a, b)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatchError {
    LengthMismatch { face: usize, ring: usize },
    VertexBudgetExceeded { needed: usize, budget: usize },
    InvariantViolated(String),
}

impl std::fmt::Display for PatchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatchError::LengthMismatch { face, ring } => {
                write!(f, "patch for a {ring}-gon applied to a {face}-gon")
            }
            PatchError::VertexBudgetExceeded { needed, budget } => {
                write!(f, "patch needs {needed} vertices, budget is {budget}")
            }
            PatchError::InvariantViolated(s) => write!(f, "invariant violated: {s}"),
        }
    }
}

impl std::error::Error for PatchError {}

struct Gen {
    n: usize,
    max_len: usize,
    max_new: usize,
    out: Vec<Patch>,
}

impl Gen {
    /// `f2` holds the arcs so far (as offsets from the first arc's start
    /// `s1`), `gaps` the finished gap faces, `used` the new vertices.
    fn close_or_extend(&mut self, s1: usize, f2: &mut Vec<Pv>, gaps: &mut Vec<Vec<Pv>>, used: usize, e: usize) {
        let n = self.n;
        // Close: bridge from offset e back to offset n (= s1).
        let count = n - e + 1;
        for p in count.max(3) - count..=self.max_new - used {
            if f2.len() + p > self.max_len {
                break;
            }
            if f2.len() + p < 3 {
                continue;
            }
            let mut f = f2.clone();
            f.extend((0..p).map(|k| Pv::New(used + k)));
            let mut g = gaps.clone();
            g.push(gap(e, n, used, p));
            self.out.push(finish(n, s1, f, g, used + p));
        }
        // Extend: another arc starting at offset s > e.
        for s in e + 1..n {
            let count = s - e + 1;
            for p in count.max(3) - count..=self.max_new - used {
                if f2.len() + p + 1 > self.max_len {
                    break;
                }
                for last in s..n {
                    let arc = last - s + 1;
                    if f2.len() + p + arc > self.max_len {
                        break;
                    }
                    let base = f2.len();
                    f2.extend((0..p).map(|k| Pv::New(used + k)));
                    f2.extend((s..=last).map(Pv::Ring));
                    gaps.push(gap(e, s, used, p));
                    self.close_or_extend(s1, f2, gaps, used + p, last);
                    gaps.pop();
                    f2.truncate(base);
                }
            }
        }
    }
}

/// Gap face between boundary offsets `e..=s` and the bridge `New(used..used+p)`.
fn gap(e: usize, s: usize, used: usize, p: usize) -> Vec<Pv> {
    let mut g: Vec<Pv> = (e..=s).map(Pv::Ring).collect();
    g.extend((0..p).rev().map(|k| Pv::New(used + k)));
    g
}

/// Converts offsets to boundary positions.
fn finish(n: usize, s1: usize, f2: Vec<Pv>, gaps: Vec<Vec<Pv>>, new_vertices: usize) -> Patch {
    let conv = |v: Pv| match v {
        Pv::Ring(o) => Pv::Ring((s1 + o) % n),
        x => x,
    };
    Patch {
        ring: n,
        f2: f2.into_iter().map(conv).collect(),
        gaps: gaps.into_iter().map(|g| g.into_iter().map(conv).collect()).collect(),
        new_vertices,
    }
}

/// Every patch for an `n`-gon with `F2` of length at most `max_len` and at
/// most `max_new` new vertices, completion included, sorted.
pub fn patches(n: usize, max_len: usize, max_new: usize) -> Vec<Patch> {
    let mut gen = Gen {
        n,
        max_len,
        max_new,
        out: Vec::new(),
    };
    if n <= max_len {
        gen.out.push(Patch {
            ring: n,
            f2: (0..n).map(Pv::Ring).collect(),
            gaps: Vec::new(),
            new_vertices: 0,
        });
    }
    // First arc of length l1 covers offsets 0..l1, with b_0 at offset j.
    for l1 in 2..=n.min(max_len) {
        for j in 0..=l1 - 2 {
            let s1 = (n - j) % n;
            let mut f2: Vec<Pv> = (0..l1).map(Pv::Ring).collect();
            gen.close_or_extend(s1, &mut f2, &mut Vec::new(), 0, l1 - 1);
        }
    }
    let mut out = gen.out;
    out.sort();
    out
}

type Key = (usize, usize, usize);

/// Memoized [`patches`].
#[derive(Default)]
pub struct PatchCache {
    map: RwLock<HashMap<Key, std::sync::Arc<Vec<Patch>>>>,
}

impl PatchCache {
    pub fn get(&self, n: usize, max_len: usize, max_new: usize) -> std::sync::Arc<Vec<Patch>> {
        let max_len = max_len.min(n + max_new);
        let key = (n, max_len, max_new);
        if let Some(v) = self.map.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = std::sync::Arc::new(patches(n, max_len, max_new));
        self.map.write().unwrap().entry(key).or_insert(v).clone()
    }
}

/// Glues `patch` into incomplete face `face` of `g`, with boundary position
/// `i` placed at the face's `(i + phi) mod n`-th vertex.
pub fn apply_patch(
    g: &PartialPlaneGraph,
    face: usize,
    patch: &Patch,
    phi: usize,
    max_vertices: usize,
) -> Result<PartialPlaneGraph, PatchError> {
    let fv = g.graph.face(face);
    let n = fv.len();
    if n != patch.ring {
        return Err(PatchError::LengthMismatch { face: n, ring: patch.ring });
    }
    if g.complete[face] {
        return Err(PatchError::InvariantViolated(format!("face {face} is complete")));
    }
    let v0 = g.graph.vertex_count();
    if v0 + patch.new_vertices > max_vertices {
        return Err(PatchError::VertexBudgetExceeded {
            needed: v0 + patch.new_vertices,
            budget: max_vertices,
        });
    }
    for (a, b) in patch.chords() {
        let (x, y) = (fv[(a + phi) % n], fv[(b + phi) % n]);
        if g.graph.has_edge(x, y) {
            return Err(PatchError::InvariantViolated(format!("chord {x}-{y} duplicates an edge")));
        }
    }
    let map = |v: &Pv| match *v {
        Pv::Ring(i) => fv[(i + phi) % n],
        Pv::New(k) => v0 + k,
    };
    let mut faces: Vec<Vec<usize>> = Vec::with_capacity(g.graph.face_count() + patch.gaps.len());
    let mut complete = Vec::with_capacity(faces.capacity());
    for (i, (f, c)) in g.graph.faces().iter().zip(&g.complete).enumerate() {
        if i != face {
            faces.push(f.clone());
            complete.push(*c);
        }
    }
    faces.push(patch.f2.iter().map(map).collect());
    complete.push(true);
    for gap in &patch.gaps {
        faces.push(gap.iter().map(map).collect());
        complete.push(false);
    }
    PartialPlaneGraph::new(faces, complete).map_err(|e| PatchError::InvariantViolated(format!("{e:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Independent parametrization: choose the set `S` of boundary vertices
    /// on `F2` (containing `b_0`, `b_1`) and, between cyclically consecutive
    /// members, either the boundary edge or a bridge with some new vertices.
    fn brute(n: usize, max_len: usize, max_new: usize) -> BTreeSet<(Vec<Pv>, BTreeSet<Vec<Pv>>)> {
        let canon = |f: &[Pv]| -> Vec<Pv> {
            let i = (0..f.len()).min_by_key(|&i| f[i]).unwrap();
            f[i..].iter().chain(&f[..i]).copied().collect()
        };
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << n) {
            if mask & 3 != 3 {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let k = s.len();
            // Gap i lies between s[i] and s[i+1]; counts[i] new vertices, or
            // None for the boundary edge.
            let mut choices: Vec<Vec<Option<usize>>> = Vec::new();
            for i in 0..k {
                let (a, b) = (s[i], s[(i + 1) % k]);
                let adjacent = (a + 1) % n == b;
                let mut c = Vec::new();
                if adjacent {
                    c.push(None);
                }
                if !(a == 0 && b == 1) {
                    let ring_count = (b + n - a) % n + 1;
                    for p in 0..=max_new {
                        if ring_count + p >= 3 {
                            c.push(Some(p));
                        }
                    }
                }
                choices.push(c);
            }
            let mut idx = vec![0; k];
            'outer: loop {
                let mut f2 = Vec::new();
                let mut gaps = BTreeSet::new();
                let mut used = 0;
                for i in 0..k {
                    let (a, b) = (s[i], s[(i + 1) % k]);
                    f2.push(Pv::Ring(a));
                    if let Some(p) = choices[i][idx[i]] {
                        let news: Vec<Pv> = (used..used + p).map(Pv::New).collect();
                        used += p;
                        f2.extend(news.iter().copied());
                        let mut g = Vec::new();
                        let mut x = a;
                        loop {
                            g.push(Pv::Ring(x));
                            if x == b && g.len() > 1 {
                                break;
                            }
                            x = (x + 1) % n;
                        }
                        g.extend(news.iter().rev().copied());
                        gaps.insert(canon(&g));
                    }
                }
                let valid = (3..=max_len).contains(&f2.len()) && used <= max_new;
                if valid {
                    out.insert((f2, gaps));
                }
                for i in 0..k {
                    idx[i] += 1;
                    if idx[i] < choices[i].len() {
                        continue 'outer;
                    }
                    idx[i] = 0;
                }
                break;
            }
        }
        out
    }

    /// New-vertex labels depend on traversal start; relabel them in `F2`
    /// order from `b_0`.
    fn normalize(p: &Patch) -> (Vec<Pv>, BTreeSet<Vec<Pv>>) {
        let i = p.f2.iter().position(|&v| v == Pv::Ring(0)).unwrap();
        let f2: Vec<Pv> = p.f2[i..].iter().chain(&p.f2[..i]).copied().collect();
        let mut rename = HashMap::new();
        for v in &f2 {
            if let Pv::New(k) = v {
                let next = rename.len();
                rename.entry(*k).or_insert(next);
            }
        }
        let r = |v: &Pv| match v {
            Pv::New(k) => Pv::New(rename[k]),
            x => *x,
        };
        let canon = |f: Vec<Pv>| -> Vec<Pv> {
            let i = (0..f.len()).min_by_key(|&i| f[i]).unwrap();
            f[i..].iter().chain(&f[..i]).copied().collect()
        };
        (
            f2.iter().map(r).collect(),
            p.gaps.iter().map(|g| canon(g.iter().map(r).collect())).collect(),
        )
    }

    #[test]
    fn matches_brute_force() {
        for n in 3..=7 {
            for max_new in 0..=3 {
                for max_len in [4, 6, 9] {
                    let got: Vec<_> = patches(n, max_len, max_new).iter().map(normalize).collect();
                    let set: BTreeSet<_> = got.iter().cloned().collect();
                    assert_eq!(set.len(), got.len(), "duplicates n={n}");
                    assert_eq!(set, brute(n, max_len, max_new), "n={n} len={max_len} new={max_new}");
                }
            }
        }
    }

    #[test]
    fn triangle_patches() {
        let ps = patches(3, 8, 1);
        // Completion, and F2 one of (b0 b1 x), (b2 b0 b1 x), (b0 b1 b2 x).
        assert_eq!(ps.len(), 4);
        assert!(ps.iter().any(|p| p.is_completion()));
        let q = ps.iter().find(|p| p.f2.len() == 3 && !p.is_completion()).unwrap();
        assert_eq!(q.gaps[0].len(), 4);
        assert!(patches(3, 8, 0).iter().all(|p| p.is_completion()));
    }

    #[test]
    fn apply_errors() {
        let s = PartialPlaneGraph::initial_polygon(4);
        let p = patches(3, 8, 0).remove(0);
        assert_eq!(
            apply_patch(&s, 1, &p, 0, 10).unwrap_err(),
            PatchError::LengthMismatch { face: 4, ring: 3 }
        );
        let q = patches(4, 8, 2).into_iter().find(|p| p.new_vertices == 2).unwrap();
        assert!(matches!(
            apply_patch(&s, 1, &q, 0, 5),
            Err(PatchError::VertexBudgetExceeded { .. })
        ));
        assert!(apply_patch(&s, 1, &q, 0, 6).is_ok());
    }

    #[test]
    fn completion_of_polygon() {
        let s = PartialPlaneGraph::initial_polygon(5);
        let c = patches(5, 8, 0).into_iter().find(|p| p.is_completion()).unwrap();
        let t = apply_patch(&s, 1, &c, 0, 5).unwrap();
        assert!(t.is_terminal());
        assert_eq!(t.graph.face_count(), 2);
    }
}
