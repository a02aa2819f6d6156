//! The admissible-weight linear program.

use crate::constants::constants;
use crate::lp::{LpError, LpModel, Outcome, Rel};
use crate::planegraph::{PlaneGraph, VertexType};

use super::separated::separated_sets;

/// Above this many type-(5,0) vertices only singleton and pair rows are
/// emitted for the 0.55 k condition.
pub const FULL_SUBSET_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct WeightLp {
    pub model: LpModel,
    /// Model variable of each face.
    pub face_vars: Vec<usize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSolution {
    pub total: f64,
    pub weights: Vec<f64>,
}

fn subsets_upto(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Builds the admissibility LP with every table constant multiplied by
/// `scale`. The objective is `-sum w`, so the model's optimum is minus the
/// least total weight.
pub fn weight_lp_scaled(g: &PlaneGraph, scale: f64) -> WeightLp {
    let t = constants();
    let mut m = LpModel::new("weights");
    let mut warnings = Vec::new();
    let face_vars: Vec<usize> = (0..g.face_count())
        .map(|f| m.add_var(&format!("w.f{f}"), 0.0, f64::INFINITY))
        .collect();
    let faces_meeting = |vs: &[usize]| -> Vec<usize> {
        (0..g.face_count())
            .filter(|&f| g.face(f).iter().any(|v| vs.contains(v)))
            .collect()
    };

    for f in 0..g.face_count() {
        let d = t.d_of(g.face(f).len()).expect("face length >= 3");
        m.add_row(vec![(face_vars[f], 1.0)], Rel::Ge, scale * d, "identity:admissible-d");
    }
    let mut five_zero = Vec::new();
    for v in 0..g.vertex_count() {
        let vt = g.vertex_type(v).expect("vertex in range");
        if vt.r == 0 {
            let b = t.b_of(vt.p, vt.q);
            let coefs = g.faces_at(v).iter().map(|&f| (face_vars[f], 1.0)).collect();
            m.add_row(coefs, Rel::Ge, scale * b, "identity:admissible-b");
        }
        if vt == (VertexType { p: 5, q: 0, r: 0 }) {
            five_zero.push(v);
        }
    }
    let kmax = if five_zero.len() > FULL_SUBSET_LIMIT {
        warnings.push(format!(
            "{} vertices of type (5,0): only singleton and pair rows emitted",
            five_zero.len()
        ));
        2
    } else {
        4
    };
    for vs in subsets_upto(&five_zero, kmax) {
        let coefs = faces_meeting(&vs).into_iter().map(|f| (face_vars[f], 1.0)).collect();
        let rhs = scale * t.vertex_weight_55.value * vs.len() as f64;
        m.add_row(coefs, Rel::Ge, rhs, "identity:admissible-055");
    }
    for s in separated_sets(g) {
        if s.vertices.is_empty() {
            continue;
        }
        let vs: Vec<usize> = s.vertices.iter().copied().collect();
        let fs = faces_meeting(&vs);
        let a: f64 = vs
            .iter()
            .map(|&v| t.a_of(g.vertex_type(v).unwrap().p))
            .sum();
        let d: f64 = fs.iter().map(|&f| t.d_of(g.face(f).len()).unwrap()).sum();
        let coefs = fs.into_iter().map(|f| (face_vars[f], 1.0)).collect();
        m.add_row(coefs, Rel::Ge, scale * (a + d), "identity:admissible-separated");
    }
    m.set_objective(face_vars.iter().map(|&j| (j, -1.0)).collect());
    WeightLp {
        model: m,
        face_vars,
        warnings,
    }
}

pub fn weight_lp(g: &PlaneGraph) -> WeightLp {
    weight_lp_scaled(g, 1.0)
}

impl WeightLp {
    pub fn solve(&self) -> Result<WeightSolution, LpError> {
        self.read(self.model.solve()?)
    }

    /// As [`WeightLp::solve`], with the optimum re-derived in exact arithmetic.
    pub fn solve_exact(&self) -> Result<WeightSolution, LpError> {
        self.read(self.model.solve_checked()?.outcome)
    }

    fn read(&self, o: Outcome) -> Result<WeightSolution, LpError> {
        match o {
            Outcome::Optimal { value, x } => Ok(WeightSolution {
                total: -value,
                weights: self.face_vars.iter().map(|&j| x[j]).collect(),
            }),
            // Weights are unbounded above, so the program is always feasible
            // and bounded below by zero.
            _ => unreachable!("admissibility LP is feasible and bounded"),
        }
    }
}

/// Least total weight of an admissible assignment.
pub fn min_total_weight(g: &PlaneGraph) -> Result<WeightSolution, LpError> {
    weight_lp(g).solve()
}

/// Whether `w` satisfies every row of the admissibility LP to `tol`.
pub fn is_admissible(g: &PlaneGraph, w: &[f64], tol: f64) -> bool {
    let lp = weight_lp(g);
    w.iter().all(|&x| x >= -tol)
        && lp.model.rows.iter().all(|r| {
            let lhs: f64 = r
                .coefs
                .iter()
                .map(|&(j, a)| a * w[lp.face_vars.iter().position(|&v| v == j).unwrap()])
                .sum();
            match r.rel {
                Rel::Ge => lhs >= r.rhs - tol,
                Rel::Le => lhs <= r.rhs + tol,
                Rel::Eq => (lhs - r.rhs).abs() <= tol,
            }
        })
}
