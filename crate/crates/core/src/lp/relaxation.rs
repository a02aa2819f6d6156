//! The linear relaxation of the score over a plane graph.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::constants::constants;
use crate::planegraph::PlaneGraph;
use crate::tame::weight_lp_scaled;

use super::ineqdb::{eval, Ctx, IneqDb, Template};
use super::model::{LpError, LpModel};
use super::simplex::Rel;

pub fn y_name(v: usize) -> String {
    format!("y.{v}")
}

pub fn e_name(v: usize, w: usize) -> String {
    format!("e.{}.{}", v.min(w), v.max(w))
}

pub fn alpha_name(v: usize, f: usize) -> String {
    format!("alpha.{v}.{f}")
}

pub fn sigma_name(f: usize) -> String {
    format!("sigma.{f}")
}

pub fn tau_name(f: usize) -> String {
    format!("tau.{f}")
}

pub fn sol_name(f: usize) -> String {
    format!("sol.{f}")
}

/// Index sets of the relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub vertices: Vec<usize>,
    pub faces: Vec<usize>,
    pub angles: Vec<(usize, usize)>,
    pub directed: Vec<(usize, usize)>,
    pub undirected: Vec<(usize, usize)>,
    pub triangles: Vec<usize>,
}

pub fn schema(g: &PlaneGraph) -> Schema {
    let faces: Vec<usize> = (0..g.face_count()).collect();
    let mut angles = Vec::new();
    let mut directed = Vec::new();
    for &f in &faces {
        let fv = g.face(f);
        for (i, &v) in fv.iter().enumerate() {
            angles.push((v, f));
            directed.push((v, fv[(i + 1) % fv.len()]));
        }
    }
    let mut undirected: Vec<(usize, usize)> = directed.iter().filter(|(a, b)| a < b).copied().collect();
    undirected.sort_unstable();
    Schema {
        vertices: (0..g.vertex_count()).collect(),
        triangles: faces.iter().copied().filter(|&f| g.face(f).len() == 3).collect(),
        faces,
        angles,
        directed,
        undirected,
    }
}

/// Lower bound installed on `y`: 0 as printed in the bound block, or 2 when
/// the db sets `(policy y-lower 2)`.
pub fn y_lower(db: &IneqDb) -> Result<f64, LpError> {
    match db.policy("y-lower") {
        None | Some("0") => Ok(0.0),
        Some("2") => Ok(2.0),
        Some(v) => Err(LpError::DbContext {
            id: "policy y-lower".into(),
            msg: format!("expected 0 or 2, got `{v}`"),
        }),
    }
}

/// Builds the relaxation: bound block, the three identity families, the
/// admissibility rows with `w(F) = tau[F] / pt`, every applicable db row, and
/// the objective `max sum sigma[F]`.
pub fn build_relaxation(g: &PlaneGraph, db: &IneqDb) -> Result<LpModel, LpError> {
    let t = constants();
    let two_t0 = 2.0 * t.t0.value;
    let zp = t.zeta * t.pt;
    let ylo = y_lower(db)?;
    let mut m = LpModel::new("relaxation");
    m.set_note("y-lower", &ylo.to_string());
    let s = schema(g);
    for &v in &s.vertices {
        m.add_var(&y_name(v), ylo, two_t0);
    }
    for &(v, w) in &s.undirected {
        m.add_var(&e_name(v, w), 0.0, two_t0);
    }
    for &(v, f) in &s.angles {
        m.add_var(&alpha_name(v, f), 0.0, 2.0 * PI);
    }
    for &f in &s.faces {
        m.add_var(&sigma_name(f), f64::NEG_INFINITY, f64::INFINITY);
        m.add_var(&tau_name(f), f64::NEG_INFINITY, f64::INFINITY);
        m.add_var(&sol_name(f), 0.0, 4.0 * PI);
    }
    let id = |m: &LpModel, n: String| m.var(&n).expect("declared above");

    for &f in &s.faces {
        let row = vec![(id(&m, tau_name(f)), 1.0), (id(&m, sol_name(f)), -zp), (id(&m, sigma_name(f)), 1.0)];
        m.add_row(row, Rel::Eq, 0.0, "identity:tau");
    }
    for &v in &s.vertices {
        let row = g.faces_at(v).iter().map(|&f| (id(&m, alpha_name(v, f)), 1.0)).collect();
        m.add_row(row, Rel::Eq, 2.0 * PI, "identity:angle-sum");
    }
    for &f in &s.faces {
        let fv = g.face(f);
        let mut row = vec![(id(&m, sol_name(f)), 1.0)];
        row.extend(fv.iter().map(|&v| (id(&m, alpha_name(v, f)), -1.0)));
        m.add_row(row, Rel::Eq, -((fv.len() - 2) as f64) * PI, "identity:sol");
    }

    let w = weight_lp_scaled(g, t.pt);
    let tau_of: HashMap<usize, usize> = w
        .face_vars
        .iter()
        .enumerate()
        .map(|(f, &j)| (j, id(&m, tau_name(f))))
        .collect();
    for r in &w.model.rows {
        let row = r.coefs.iter().map(|&(j, a)| (tau_of[&j], a)).collect();
        m.add_row(row, r.rel, r.rhs, r.provenance.clone());
    }

    let env = db.constants()?;
    for tpl in db.rows() {
        for (row, rhs) in instantiate(g, &m, tpl, &env)? {
            m.add_row(row, tpl.rel, rhs, format!("db:{}", tpl.id));
        }
    }
    let obj = s.faces.iter().map(|&f| (id(&m, sigma_name(f)), 1.0)).collect();
    m.set_objective(obj);
    Ok(m)
}

type Instance = (Vec<(usize, f64)>, f64);

fn coefficient(tpl: &Template, env: &HashMap<String, f64>) -> Result<Vec<(String, f64)>, LpError> {
    tpl.lhs
        .iter()
        .map(|(r, v)| {
            eval(v, env)
                .map(|x| (r.clone(), x))
                .map_err(|msg| LpError::DbContext { id: tpl.id.clone(), msg })
        })
        .collect()
}

/// Rows of `tpl` over the graph-level variables of `m`.
fn instantiate(
    g: &PlaneGraph,
    m: &LpModel,
    tpl: &Template,
    env: &HashMap<String, f64>,
) -> Result<Vec<Instance>, LpError> {
    let coefs = coefficient(tpl, env)?;
    let rhs = eval(&tpl.rhs, env).map_err(|msg| LpError::DbContext {
        id: tpl.id.clone(),
        msg,
    })?;
    let var = |n: String| m.var_or_err(&n);
    let unresolved = |role: &str| LpError::DbContext {
        id: tpl.id.clone(),
        msg: format!("role `{role}` unresolvable here"),
    };
    let mut out = Vec::new();
    match &tpl.ctx {
        Ctx::Graph => {
            let mut row = Vec::new();
            for (role, a) in &coefs {
                for f in 0..g.face_count() {
                    let n = match role.as_str() {
                        "sigma" => sigma_name(f),
                        "tau" => tau_name(f),
                        "sol" => sol_name(f),
                        r => return Err(unresolved(r)),
                    };
                    row.push((var(n)?, *a));
                }
            }
            out.push((row, rhs));
        }
        Ctx::Face(sel) => {
            for f in 0..g.face_count() {
                let fv = g.face(f);
                if !sel.matches(fv.len()) {
                    continue;
                }
                let mut row = Vec::new();
                for (role, a) in &coefs {
                    match role.as_str() {
                        "sigma" => row.push((var(sigma_name(f))?, *a)),
                        "tau" => row.push((var(tau_name(f))?, *a)),
                        "sol" => row.push((var(sol_name(f))?, *a)),
                        "y" => {
                            for &v in fv {
                                row.push((var(y_name(v))?, *a));
                            }
                        }
                        "alpha" => {
                            for &v in fv {
                                row.push((var(alpha_name(v, f))?, *a));
                            }
                        }
                        "e" => {
                            for i in 0..fv.len() {
                                row.push((var(e_name(fv[i], fv[(i + 1) % fv.len()]))?, *a));
                            }
                        }
                        r => return Err(unresolved(r)),
                    }
                }
                out.push((row, rhs));
            }
        }
        Ctx::Angle(sel) => {
            for f in 0..g.face_count() {
                if !sel.matches(g.face(f).len()) {
                    continue;
                }
                for &v in g.face(f) {
                    let mut row = Vec::new();
                    for (role, a) in &coefs {
                        let n = match role.as_str() {
                            "alpha" => alpha_name(v, f),
                            "y" => y_name(v),
                            "sigma" => sigma_name(f),
                            "tau" => tau_name(f),
                            "sol" => sol_name(f),
                            r => return Err(unresolved(r)),
                        };
                        row.push((var(n)?, *a));
                    }
                    out.push((row, rhs));
                }
            }
        }
        Ctx::Vertex { p, q, r } => {
            for v in 0..g.vertex_count() {
                let ty = g.vertex_type(v).expect("vertex in range");
                let ok = |want: &Option<u32>, have: u32| want.map_or(true, |w| w == have);
                if !(ok(p, ty.p) && ok(q, ty.q) && ok(r, ty.r)) {
                    continue;
                }
                let mut row = Vec::new();
                for (role, a) in &coefs {
                    match role.as_str() {
                        "y" => row.push((var(y_name(v))?, *a)),
                        "sigma" | "tau" => {
                            for &f in g.faces_at(v) {
                                let n = if role == "sigma" { sigma_name(f) } else { tau_name(f) };
                                row.push((var(n)?, *a));
                            }
                        }
                        r => return Err(unresolved(r)),
                    }
                }
                out.push((row, rhs));
            }
        }
        Ctx::Refine(_) => {}
    }
    Ok(out)
}
