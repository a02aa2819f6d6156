//! Face refinements: internal structure of a face as extra LP variables.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::constants::constants;
use crate::planegraph::PlaneGraph;

use super::ineqdb::{eval, Ctx, IneqDb};
use super::model::{LpError, LpModel};
use super::relaxation::{alpha_name, e_name, sigma_name, y_lower, y_name};
use super::simplex::Rel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    FlatQuarter,
    UprightQuarter,
    AnchoredSimplex,
    Generic,
}

impl Role {
    pub fn tag(self) -> &'static str {
        match self {
            Role::FlatQuarter => "flat-quarter",
            Role::UprightQuarter => "upright-quarter",
            Role::AnchoredSimplex => "anchored-simplex",
            Role::Generic => "generic-subregion",
        }
    }

    pub fn from_tag(s: &str) -> Option<Role> {
        [Role::FlatQuarter, Role::UprightQuarter, Role::AnchoredSimplex, Role::Generic]
            .into_iter()
            .find(|r| r.tag() == s)
    }
}

/// A refinement of face `face`. Vertex ids below the graph's vertex count
/// are graph vertices; larger ids are new.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub face: usize,
    pub faces: Vec<Vec<usize>>,
    pub roles: Vec<Role>,
    /// New vertices standing for the far end of an upright diagonal.
    pub upright: Vec<usize>,
    /// Upper bound on the penalty variable.
    pub penalty: f64,
}

impl Refinement {
    /// Checks that the graph vertices used are exactly those of the face and
    /// that the refinement faces together with the face's opposite form a
    /// plane graph.
    pub fn validate(&self, g: &PlaneGraph) -> Result<(), LpError> {
        let bad = |m: String| Err(LpError::Refinement(m));
        if self.face >= g.face_count() {
            return bad(format!("no face {}", self.face));
        }
        if self.roles.len() != self.faces.len() {
            return bad("one role per refinement face".into());
        }
        let n = g.vertex_count();
        let fv = g.face(self.face);
        let used: BTreeSet<usize> = self.faces.iter().flatten().copied().filter(|&v| v < n).collect();
        let want: BTreeSet<usize> = fv.iter().copied().collect();
        if used != want {
            return bad(format!("graph vertices {used:?} differ from the face {want:?}"));
        }
        for &u in &self.upright {
            if u < n || !self.faces.iter().flatten().any(|&v| v == u) {
                return bad(format!("upright vertex {u} is not a new vertex of the refinement"));
            }
        }
        let mut all = self.faces.clone();
        all.push(fv.iter().rev().copied().collect());
        if let Err(e) = PlaneGraph::build(&all) {
            return bad(format!("with the opposite face: {e}"));
        }
        Ok(())
    }

    pub fn flat_quarters(&self) -> usize {
        self.roles.iter().filter(|&&r| r == Role::FlatQuarter).count()
    }

    /// Sets the penalty bound from the heptagon/octagon menu for the number of
    /// flat quarters.
    pub fn with_menu_penalty(mut self, n: usize, loop_42: bool) -> Result<Refinement, LpError> {
        let t = constants();
        let p = t
            .penalty_menu(n, self.flat_quarters(), loop_42)
            .map_err(|e| LpError::Refinement(e.to_string()))?;
        self.penalty = p.value(t);
        Ok(self)
    }
}

fn new_y(face: usize, v: usize) -> String {
    format!("y.r{face}.{v}")
}

pub fn sc_name(face: usize, i: usize) -> String {
    format!("sc.{face}.{i}")
}

pub fn tausc_name(face: usize, i: usize) -> String {
    format!("tausc.{face}.{i}")
}

pub fn subsol_name(face: usize, i: usize) -> String {
    format!("sol.{face}.{i}")
}

pub fn subalpha_name(v: &str, face: usize, i: usize) -> String {
    format!("alpha.{v}.{face}.{i}")
}

pub fn penalty_name(face: usize) -> String {
    format!("pi.{face}")
}

/// Adds the refinement's variables and rows to a copy of `model`, which must
/// be a relaxation of `g`.
pub fn refine_face(model: &LpModel, g: &PlaneGraph, r: &Refinement, db: &IneqDb) -> Result<LpModel, LpError> {
    r.validate(g)?;
    let t = constants();
    let two_t0 = 2.0 * t.t0.value;
    let zp = t.zeta * t.pt;
    let n = g.vertex_count();
    let f = r.face;
    let mut m = model.clone();
    let ylo = y_lower(db)?;
    let vname = |v: usize| if v < n { y_name(v) } else { new_y(f, v) };
    let label = |v: usize| if v < n { v.to_string() } else { format!("r{f}.{v}") };

    let mut new_vertices: BTreeSet<usize> = BTreeSet::new();
    for &v in r.faces.iter().flatten() {
        if v >= n && new_vertices.insert(v) {
            if r.upright.contains(&v) {
                m.add_var(&vname(v), two_t0, 8f64.sqrt());
            } else {
                m.add_var(&vname(v), ylo, two_t0);
            }
        }
    }
    for face in &r.faces {
        for i in 0..face.len() {
            let (a, b) = (face[i], face[(i + 1) % face.len()]);
            if a < n && b < n {
                if !g.has_edge(a, b) {
                    m.add_var(&e_name(a, b), 0.0, 2.0 * two_t0);
                }
            } else {
                let (x, y) = (label(a.min(b)), label(a.max(b)));
                m.add_var(&format!("e.{x}.{y}"), 0.0, 2.0 * two_t0);
            }
        }
    }
    let pen = m.add_var(&penalty_name(f), 0.0, r.penalty);
    let mut sc = Vec::new();
    for (i, face) in r.faces.iter().enumerate() {
        let s = m.add_var(&sc_name(f, i), f64::NEG_INFINITY, f64::INFINITY);
        let ts = m.add_var(&tausc_name(f, i), f64::NEG_INFINITY, f64::INFINITY);
        let so = m.add_var(&subsol_name(f, i), 0.0, 4.0 * PI);
        let mut row = vec![(so, 1.0)];
        for &v in face {
            let a = m.add_var(&subalpha_name(&label(v), f, i), 0.0, 2.0 * PI);
            row.push((a, -1.0));
        }
        m.add_row(row, Rel::Eq, -((face.len() - 2) as f64) * PI, "identity:refine-sol");
        m.add_row(vec![(ts, 1.0), (so, -zp), (s, 1.0)], Rel::Eq, 0.0, "identity:tausc");
        if r.roles[i] == Role::AnchoredSimplex {
            m.add_row(vec![(s, 1.0)], Rel::Le, 0.0, "refine:anchored-sign");
        }
        sc.push(s);
    }
    let mut row = vec![(m.var_or_err(&sigma_name(f))?, 1.0), (pen, -1.0)];
    row.extend(sc.iter().map(|&s| (s, -1.0)));
    m.add_row(row, Rel::Le, 0.0, "identity:refine-penalty");

    let mut at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, face) in r.faces.iter().enumerate() {
        for &v in face {
            at.entry(v).or_default().push(i);
        }
    }
    for (&v, faces) in &at {
        let mut row: Vec<(usize, f64)> = faces
            .iter()
            .map(|&i| (m.var(&subalpha_name(&label(v), f, i)).unwrap(), 1.0))
            .collect();
        if v < n {
            row.push((m.var_or_err(&alpha_name(v, f))?, -1.0));
            m.add_row(row, Rel::Eq, 0.0, "identity:alpha-compat");
        } else {
            m.add_row(row, Rel::Eq, 2.0 * PI, "identity:angle-sum");
        }
    }

    let env = db.constants()?;
    for tpl in db.rows() {
        let Ctx::Refine(tag) = &tpl.ctx else { continue };
        let err = |msg: String| LpError::DbContext { id: tpl.id.clone(), msg };
        let rhs = eval(&tpl.rhs, &env).map_err(err)?;
        for (i, face) in r.faces.iter().enumerate() {
            if r.roles[i].tag() != tag {
                continue;
            }
            let mut row = Vec::new();
            for (role, v) in &tpl.lhs {
                let a = eval(v, &env).map_err(err)?;
                match role.as_str() {
                    "sc" => row.push((sc[i], a)),
                    "tausc" => row.push((m.var(&tausc_name(f, i)).unwrap(), a)),
                    "sol" => row.push((m.var(&subsol_name(f, i)).unwrap(), a)),
                    "penalty" => row.push((pen, a)),
                    "y" => {
                        for &v in face {
                            row.push((m.var_or_err(&vname(v))?, a));
                        }
                    }
                    other => return Err(err(format!("role `{other}` unresolvable for a refinement face"))),
                }
            }
            m.add_row(row, tpl.rel, rhs, format!("db:{}", tpl.id));
        }
    }
    Ok(m)
}
