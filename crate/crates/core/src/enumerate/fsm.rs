use std::collections::{BTreeMap, HashSet};

use crate::constants::constants;
use crate::lp::{LpModel, Outcome, Rel};
use crate::par::Exec;
use crate::planegraph::{Archive, PlaneGraph, VertexType};
use crate::tame::{check_tame, WEIGHT_CUTOFF};

use super::partial::{arrangements, PartialPlaneGraph};
use super::patch::{apply_patch, Patch, PatchCache};

pub const PARTIAL_MARKER: &str = "partial: state budget exhausted";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceSet {
    TriQuad,
    All,
}

/// Switches for the individual prunes. Each is sound on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prunes {
    /// An incomplete triangle may only be completed.
    pub triangle: bool,
    /// An incomplete quadrilateral with at least two vertices outside it only
    /// admits faces of length at most 4 with at most one new vertex.
    pub quad: bool,
    /// New faces are no longer than the configured maximum.
    pub face_length: bool,
    /// Degree at most 6, and at most 5 on a complete exceptional face.
    pub degree: bool,
    /// Lower bounds on the admissible weight of the complete faces.
    pub weight: bool,
    /// Only the shortest incomplete face is subdivided, at its first edge.
    pub fixed_face: bool,
    /// Faces added after `I_n` have length at most `n`.
    pub seed_length: bool,
    /// Vertex seeds replace `I_3` and `I_4`; no finished vertex may precede
    /// the seed's type.
    pub seeds: bool,
}

impl Prunes {
    pub const NAMES: [&'static str; 8] = [
        "triangle",
        "quad",
        "face-length",
        "degree",
        "weight",
        "fixed-face",
        "seed-length",
        "seeds",
    ];

    pub fn all() -> Prunes {
        Prunes {
            triangle: true,
            quad: true,
            face_length: true,
            degree: true,
            weight: true,
            fixed_face: true,
            seed_length: true,
            seeds: true,
        }
    }

    pub fn none() -> Prunes {
        Prunes {
            triangle: false,
            quad: false,
            face_length: false,
            degree: false,
            weight: false,
            fixed_face: false,
            seed_length: false,
            seeds: false,
        }
    }

    fn slot(&mut self, name: &str) -> Option<&mut bool> {
        Some(match name {
            "triangle" => &mut self.triangle,
            "quad" => &mut self.quad,
            "face-length" => &mut self.face_length,
            "degree" => &mut self.degree,
            "weight" => &mut self.weight,
            "fixed-face" => &mut self.fixed_face,
            "seed-length" => &mut self.seed_length,
            "seeds" => &mut self.seeds,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, on: bool) -> Result<(), String> {
        *self.slot(name).ok_or_else(|| format!("unknown prune {name:?}"))? = on;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EnumConfig {
    pub max_vertices: usize,
    pub max_face_len: usize,
    pub faces: FaceSet,
    pub prunes: Prunes,
    /// Keep only tame terminal graphs.
    pub tame_only: bool,
    pub max_states: Option<usize>,
    pub exec: Exec,
}

impl EnumConfig {
    pub fn new(max_vertices: usize) -> EnumConfig {
        EnumConfig {
            max_vertices,
            max_face_len: 8,
            faces: FaceSet::All,
            prunes: Prunes::all(),
            tame_only: true,
            max_states: None,
            exec: Exec::default(),
        }
    }

    pub fn unpruned(max_vertices: usize) -> EnumConfig {
        EnumConfig {
            prunes: Prunes::none(),
            ..EnumConfig::new(max_vertices)
        }
    }

    fn longest_new_face(&self) -> usize {
        let mut l = usize::MAX;
        if self.faces == FaceSet::TriQuad {
            l = 4;
        }
        if self.prunes.face_length {
            l = l.min(self.max_face_len);
        }
        l
    }
}

/// The initial state a search state descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seed {
    Polygon(usize),
    Vertex(u32, u32),
}

#[derive(Debug, Clone)]
pub struct State {
    pub graph: PartialPlaneGraph,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub face: usize,
    pub phi: usize,
    pub patch: Patch,
}

pub fn initial_states(cfg: &EnumConfig) -> Vec<State> {
    let mut out = Vec::new();
    let top = cfg.longest_new_face().min(cfg.max_vertices);
    for n in 3..=top {
        if cfg.prunes.seeds && n <= 4 {
            continue;
        }
        out.push(State {
            graph: PartialPlaneGraph::initial_polygon(n),
            seed: Seed::Polygon(n),
        });
    }
    if cfg.prunes.seeds {
        for (p, q) in constants().low_b_types() {
            if 1 + (p + 2 * q) as usize > cfg.max_vertices {
                continue;
            }
            for a in arrangements(p as usize, q as usize) {
                out.push(State {
                    graph: PartialPlaneGraph::initial_vertex(&a),
                    seed: Seed::Vertex(p, q),
                });
            }
        }
    }
    out
}

/// Incomplete faces to subdivide and the rotations to try on each.
fn targets(g: &PartialPlaneGraph, cfg: &EnumConfig) -> Vec<(usize, usize)> {
    let inc = g.incomplete_faces();
    if cfg.prunes.fixed_face {
        inc.iter()
            .min_by_key(|&&f| (g.graph.face(f).len(), f))
            .map(|&f| vec![(f, 1)])
            .unwrap_or_default()
    } else {
        inc.iter().map(|&f| (f, g.graph.face(f).len())).collect()
    }
}

/// Successors of `s` that survive every enabled prune.
pub fn transitions(s: &State, cfg: &EnumConfig, cache: &PatchCache) -> Vec<(Transition, State)> {
    let g = &s.graph;
    let v = g.graph.vertex_count();
    let budget = cfg.max_vertices.saturating_sub(v);
    let mut longest = cfg.longest_new_face();
    if cfg.prunes.seed_length {
        longest = longest.min(match s.seed {
            Seed::Polygon(n) => n,
            Seed::Vertex(..) => 4,
        });
    }
    let mut out = Vec::new();
    for (f, rotations) in targets(g, cfg) {
        let face = g.graph.face(f);
        let n = face.len();
        let (mut max_len, mut max_new) = (longest, budget);
        let only_complete = cfg.prunes.triangle && n == 3 && g.graph.face_count() > 2;
        if cfg.prunes.quad && n == 4 && v - 4 >= 2 {
            max_len = max_len.min(4);
            max_new = max_new.min(1);
        }
        for patch in cache.get(n, max_len, max_new).iter() {
            if only_complete && !patch.is_completion() {
                continue;
            }
            for phi in 0..rotations {
                let Ok(child) = apply_patch(g, f, patch, phi, cfg.max_vertices) else {
                    continue;
                };
                if survives(&child, s.seed, cfg) {
                    out.push((
                        Transition {
                            face: f,
                            phi,
                            patch: patch.clone(),
                        },
                        State { graph: child, seed: s.seed },
                    ));
                }
            }
        }
    }
    out
}

fn survives(g: &PartialPlaneGraph, seed: Seed, cfg: &EnumConfig) -> bool {
    let pg = &g.graph;
    if cfg.prunes.degree {
        for v in 0..pg.vertex_count() {
            let d = pg.degree(v);
            if d > 6 {
                return false;
            }
            let on_complete_exceptional = pg
                .faces_at(v)
                .iter()
                .any(|&f| g.complete[f] && pg.face(f).len() >= 5);
            if d > 5 && on_complete_exceptional {
                return false;
            }
        }
    }
    if cfg.prunes.seeds {
        if let Seed::Vertex(p, q) = seed {
            for (_, t) in g.finished_types() {
                if t.r == 0 && (t.p, t.q) < (p, q) {
                    return false;
                }
            }
        }
    }
    if cfg.prunes.weight && weight_lower_bound(g) > WEIGHT_CUTOFF + 1e-8 {
        return false;
    }
    true
}

/// Least admissible weight carried by the complete faces alone.
pub(crate) fn weight_lower_bound(g: &PartialPlaneGraph) -> f64 {
    let t = constants();
    let pg = &g.graph;
    let complete: Vec<usize> = (0..pg.face_count()).filter(|&f| g.complete[f]).collect();
    let sum_d: i64 = complete.iter().map(|&f| t.d_dec(pg.face(f).len()).unwrap().micros).sum();
    if sum_d >= t.target.micros {
        return sum_d as f64 / 1e6;
    }
    let finished: Vec<(usize, VertexType)> = g.finished_types().into_iter().filter(|(_, ty)| ty.r == 0).collect();
    if finished.is_empty() {
        return sum_d as f64 / 1e6;
    }
    let mut m = LpModel::new("partial-weights");
    let mut var = vec![usize::MAX; pg.face_count()];
    for &f in &complete {
        var[f] = m.add_var(&format!("w.f{f}"), 0.0, f64::INFINITY);
        m.add_row(vec![(var[f], 1.0)], Rel::Ge, t.d_of(pg.face(f).len()).unwrap(), "identity:admissible-d");
    }
    let five_zero: Vec<usize> = finished
        .iter()
        .filter(|(_, ty)| (ty.p, ty.q) == (5, 0))
        .map(|&(v, _)| v)
        .collect();
    for &(v, ty) in &finished {
        let coefs = pg.faces_at(v).iter().map(|&f| (var[f], 1.0)).collect();
        m.add_row(coefs, Rel::Ge, t.b_of(ty.p, ty.q), "identity:admissible-b");
    }
    let kmax = if five_zero.len() > crate::tame::FULL_SUBSET_LIMIT { 2 } else { 4 };
    for mask in 1u64..(1u64 << five_zero.len().min(63)) {
        let k = mask.count_ones() as usize;
        if k > kmax {
            continue;
        }
        let mut fs: Vec<usize> = (0..five_zero.len())
            .filter(|&i| mask >> i & 1 == 1)
            .flat_map(|i| pg.faces_at(five_zero[i]).iter().copied())
            .collect();
        fs.sort_unstable();
        fs.dedup();
        let coefs = fs.into_iter().map(|f| (var[f], 1.0)).collect();
        m.add_row(coefs, Rel::Ge, t.vertex_weight_55.value * k as f64, "identity:admissible-055");
    }
    m.set_objective(complete.iter().map(|&f| (var[f], -1.0)).collect());
    match m.solve() {
        Ok(Outcome::Optimal { value, .. }) => -value,
        _ => sum_d as f64 / 1e6,
    }
}

#[derive(Debug, Clone)]
pub struct EnumReport {
    pub archive: Archive,
    /// States expanded, initial states included.
    pub states: usize,
    /// Terminal graphs reached, before the tameness filter and deduplication.
    pub terminals: usize,
    pub partial: bool,
}

type Key = (Option<Seed>, Vec<u8>);

fn key(s: &State, cfg: &EnumConfig) -> Key {
    let ctx = (cfg.prunes.seed_length || cfg.prunes.seeds).then_some(s.seed);
    (ctx, s.graph.code().bytes)
}

/// Breadth-first search over states, grouped by number of complete faces and
/// deduplicated up to isomorphism within each group.
pub fn enumerate(cfg: &EnumConfig) -> EnumReport {
    let cache = PatchCache::default();
    let mut buckets: BTreeMap<usize, Vec<(Key, State)>> = BTreeMap::new();
    let mut seen: BTreeMap<usize, HashSet<Key>> = BTreeMap::new();
    let mut push = |buckets: &mut BTreeMap<usize, Vec<(Key, State)>>, k: Key, s: State| {
        let c = s.graph.complete_count();
        if seen.entry(c).or_default().insert(k.clone()) {
            buckets.entry(c).or_default().push((k, s));
        }
    };
    for s in initial_states(cfg) {
        let k = key(&s, cfg);
        push(&mut buckets, k, s);
    }
    let mut states = 0;
    let mut terminals = Vec::new();
    let mut partial = false;
    while let Some((_, mut layer)) = buckets.pop_first() {
        layer.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(cap) = cfg.max_states {
            if states + layer.len() > cap {
                layer.truncate(cap - states);
                partial = true;
            }
        }
        states += layer.len();
        let results = cfg.exec.map(&layer, |(_, s)| {
            if s.graph.is_terminal() {
                (Some(s.graph.graph.clone()), Vec::new())
            } else {
                let kids = transitions(s, cfg, &cache)
                    .into_iter()
                    .map(|(_, c)| (key(&c, cfg), c))
                    .collect::<Vec<_>>();
                (None, kids)
            }
        });
        for (term, kids) in results {
            terminals.extend(term);
            for (k, c) in kids {
                push(&mut buckets, k, c);
            }
        }
        if partial {
            break;
        }
    }
    let found = terminals.len();
    let kept: Vec<PlaneGraph> = if cfg.tame_only {
        let verdicts = cfg.exec.map(&terminals, |g| check_tame(g).map(|r| r.is_tame()).unwrap_or(false));
        terminals.into_iter().zip(verdicts).filter(|(_, t)| *t).map(|(g, _)| g).collect()
    } else {
        terminals
    };
    let mut header = vec![format!(
        "max_vertices={} faces={} tame_only={}",
        cfg.max_vertices,
        match cfg.faces {
            FaceSet::TriQuad => "tri-quad",
            FaceSet::All => "all",
        },
        cfg.tame_only
    )];
    if partial {
        header.push(PARTIAL_MARKER.to_string());
    }
    EnumReport {
        archive: Archive::from_graphs(&header, kept),
        states,
        terminals: found,
        partial,
    }
}

pub fn enumerate_tame(cfg: &EnumConfig) -> Archive {
    enumerate(cfg).archive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planegraph::{canonical_code, catalog};

    #[test]
    fn sum_d_prunes_everything() {
        // Complete faces of a cube-like state already carry sum d >= 14.8.
        let faces = catalog::prism(6).faces().to_vec();
        let mut complete = vec![true; faces.len()];
        complete[0] = false;
        let g = PartialPlaneGraph::new(faces, complete).unwrap();
        assert!(weight_lower_bound(&g) >= 14.8);
        let s = State {
            graph: g,
            seed: Seed::Polygon(6),
        };
        let cfg = EnumConfig::new(12);
        assert!(transitions(&s, &cfg, &PatchCache::default()).is_empty());
    }

    #[test]
    fn octahedron_reached() {
        let mut cfg = EnumConfig::new(6);
        cfg.faces = FaceSet::TriQuad;
        let a = enumerate_tame(&cfg);
        let codes = a.codes();
        assert!(codes.contains_key(&canonical_code(&catalog::octahedron())));
    }

    #[test]
    fn budget_marks_partial() {
        let mut cfg = EnumConfig::new(8);
        cfg.max_states = Some(5);
        let r = enumerate(&cfg);
        assert!(r.partial);
        assert_eq!(r.states, 5);
        assert!(r.archive.comments().any(|c| c.contains(PARTIAL_MARKER)));
    }

    #[test]
    fn sequential_equals_parallel() {
        let mut cfg = EnumConfig::new(7);
        cfg.exec = Exec::Sequential;
        let a = enumerate_tame(&cfg).emit();
        cfg.exec = Exec::Parallel;
        assert_eq!(a, enumerate_tame(&cfg).emit());
    }
}
