//! The seven tameness properties.

mod separated;
mod weights;

use std::collections::BTreeSet;
use std::fmt;

use crate::constants::{constants, MICRO};
use crate::lp::LpError;
use crate::par::Exec;
use crate::planegraph::{circuits, Circuit, PlaneGraph};

pub use separated::{candidates, conflict, separated_sets, SeparatedSet};
pub use weights::{
    is_admissible, min_total_weight, weight_lp, weight_lp_scaled, WeightLp, WeightSolution,
    FULL_SUBSET_LIMIT,
};

/// Property 7 passes when the least total weight is below this.
pub const WEIGHT_CUTOFF: f64 = 14.8 - 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    None,
    Face(usize),
    Vertex(usize),
    Circuit(Vec<usize>),
    ScoreSum(f64),
    Weight(WeightSolution),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => f.write_str("-"),
            Witness::Face(i) => write!(f, "face {i}"),
            Witness::Vertex(v) => write!(f, "vertex {v}"),
            Witness::Circuit(c) => {
                let s: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "circuit {}", s.join(" "))
            }
            Witness::ScoreSum(s) => write!(f, "sum c = {s}"),
            Witness::Weight(w) => write!(f, "total weight {}", w.total),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Witness,
}

impl Verdict {
    fn ok() -> Verdict {
        Verdict {
            pass: true,
            witness: Witness::None,
        }
    }

    fn fail(witness: Witness) -> Verdict {
        Verdict {
            pass: false,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TameReport {
    /// `properties[i]` is property `i + 1`.
    pub properties: [Verdict; 7],
    pub min_weight: Option<WeightSolution>,
    /// 4-circuits accepted only through the one-vertex, three-spoke case.
    pub audit_circuits: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

impl TameReport {
    pub fn is_tame(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    /// Property numbers (1-based) that fail.
    pub fn failures(&self) -> Vec<usize> {
        (0..7).filter(|&i| !self.properties[i].pass).map(|i| i + 1).collect()
    }

    /// Verdict flags as a `1`/`0` string.
    pub fn flags(&self) -> String {
        self.properties
            .iter()
            .map(|p| if p.pass { '1' } else { '0' })
            .collect()
    }
}

fn property1(g: &PlaneGraph) -> Verdict {
    match (0..g.face_count()).find(|&f| !(3..=8).contains(&g.face(f).len())) {
        Some(f) => Verdict::fail(Witness::Face(f)),
        None => Verdict::ok(),
    }
}

fn property2(g: &PlaneGraph) -> Verdict {
    let faces = g.face_vertex_sets();
    for c in circuits(g, 3) {
        let vs = c.vertex_set();
        if !faces.contains(&vs) {
            return Verdict::fail(Witness::Circuit(c.vertices));
        }
    }
    Verdict::ok()
}

/// How one side of a 4-circuit is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideCase {
    Empty,
    ThreeSpoke,
    FourSpoke,
}

fn side_case(g: &PlaneGraph, c: &Circuit, side: usize) -> Option<SideCase> {
    let inner = c.enclosed(g, side);
    let on: BTreeSet<usize> = c.vertex_set();
    match inner.len() {
        0 => Some(SideCase::Empty),
        1 => {
            let v = *inner.iter().next().unwrap();
            let spokes = g.neighbors(v).iter().filter(|w| on.contains(w)).count();
            let lens: Vec<usize> = c.sides[side].iter().map(|&f| g.face(f).len()).collect();
            if g.degree(v) == 3 && spokes == 3 && lens.iter().all(|&l| l <= 4) {
                Some(SideCase::ThreeSpoke)
            } else if g.degree(v) == 4 && spokes == 4 && lens.len() == 4 && lens.iter().all(|&l| l == 3)
            {
                Some(SideCase::FourSpoke)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn property3(g: &PlaneGraph, audit: &mut Vec<Vec<usize>>) -> Verdict {
    for c in circuits(g, 4) {
        let cases = [side_case(g, &c, 0), side_case(g, &c, 1)];
        if cases.iter().all(|s| s.is_none()) {
            return Verdict::fail(Witness::Circuit(c.vertices));
        }
        let decided_by_three = cases
            .iter()
            .flatten()
            .all(|&s| s == SideCase::ThreeSpoke);
        if decided_by_three {
            audit.push(c.vertices.clone());
        }
    }
    Verdict::ok()
}

fn property4(g: &PlaneGraph) -> Verdict {
    match (0..g.vertex_count()).find(|&v| !(2..=6).contains(&g.degree(v))) {
        Some(v) => Verdict::fail(Witness::Vertex(v)),
        None => Verdict::ok(),
    }
}

fn property5(g: &PlaneGraph) -> Verdict {
    match (0..g.vertex_count()).find(|&v| g.on_exceptional_face(v) && g.degree(v) > 5) {
        Some(v) => Verdict::fail(Witness::Vertex(v)),
        None => Verdict::ok(),
    }
}

/// `sum c(len F)` in millionths, exactly.
pub fn score_sum_micros(g: &PlaneGraph) -> i64 {
    let t = constants();
    g.faces().iter().map(|f| t.c_dec(f.len()).unwrap().micros).sum()
}

fn property6(g: &PlaneGraph) -> Verdict {
    let s = score_sum_micros(g);
    if s >= 8 * MICRO {
        Verdict::ok()
    } else {
        Verdict::fail(Witness::ScoreSum(s as f64 / MICRO as f64))
    }
}

pub fn check_tame(g: &PlaneGraph) -> Result<TameReport, LpError> {
    let mut audit = Vec::new();
    let p1 = property1(g);
    let p2 = property2(g);
    let p3 = property3(g, &mut audit);
    let p4 = property4(g);
    let p5 = property5(g);
    let p6 = property6(g);
    let lp = weight_lp(g);
    let sol = lp.solve()?;
    let p7 = if sol.total < WEIGHT_CUTOFF {
        Verdict {
            pass: true,
            witness: Witness::Weight(sol.clone()),
        }
    } else {
        Verdict::fail(Witness::Weight(sol.clone()))
    };
    Ok(TameReport {
        properties: [p1, p2, p3, p4, p5, p6, p7],
        min_weight: Some(sol),
        audit_circuits: audit,
        warnings: lp.warnings,
    })
}

/// Checks many graphs; results are in input order.
pub fn check_all(graphs: &[PlaneGraph], exec: Exec) -> Vec<Result<TameReport, LpError>> {
    exec.map(graphs, check_tame)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreHeuristics {
    /// Face of length above 8, if any; scoring is skipped when present.
    pub length_violation: Option<usize>,
    pub sum_c: f64,
    /// `sum c(len F) * pt`.
    pub sum_c_pt: f64,
    /// `sum d(len F)`, a lower bound for any admissible total weight.
    pub sum_d: f64,
}

pub fn contravening_score_heuristics(g: &PlaneGraph) -> ScoreHeuristics {
    let t = constants();
    let length_violation = (0..g.face_count()).find(|&f| g.face(f).len() > 8);
    if length_violation.is_some() {
        return ScoreHeuristics {
            length_violation,
            sum_c: f64::NAN,
            sum_c_pt: f64::NAN,
            sum_d: f64::NAN,
        };
    }
    let sum_c = score_sum_micros(g) as f64 / MICRO as f64;
    let sum_d = g
        .faces()
        .iter()
        .map(|f| t.d_dec(f.len()).unwrap().micros)
        .sum::<i64>() as f64
        / MICRO as f64;
    ScoreHeuristics {
        length_violation: None,
        sum_c,
        sum_c_pt: sum_c * t.pt,
        sum_d,
    }
}
