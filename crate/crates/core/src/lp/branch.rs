//! Branch rules: each splits a model into children whose added rows cover
//! the parent domain.

use std::fmt;

use crate::constants::constants;

use super::model::{LpError, LpModel};
use super::relaxation::{e_name, sigma_name, y_name};
use super::simplex::Rel;

#[derive(Debug, Clone, PartialEq)]
pub enum BranchRule {
    /// Heights of a triangle summed against `split`.
    TriangleYSum { face: usize, split: f64 },
    /// Two flat quarters on either diagonal, four upright quarters, or no
    /// quarters.
    Quad4Case { face: usize },
    /// Height of an upright diagonal against `split`, the high side broken
    /// further on every anchor length against `anchor`.
    UprightHeight {
        diag: String,
        anchors: Vec<String>,
        split: f64,
        anchor: f64,
    },
    /// Compression type, short diagonal with large circumradius, long
    /// diagonal.
    FlatQuarter3Case { diag: String, split: f64 },
    /// Both edges short with small circumradius, either edge long, or both
    /// short with large circumradius.
    TypeA3Case { y5: String, y6: String, split: f64 },
    /// A quadrilateral diagonal below, inside or above `[lo, hi]`.
    QuadDiagonal { diag: String, lo: f64, hi: f64 },
}

impl BranchRule {
    pub fn kind(&self) -> &'static str {
        match self {
            BranchRule::TriangleYSum { .. } => "triangle-ysum",
            BranchRule::Quad4Case { .. } => "quad-4case",
            BranchRule::UprightHeight { .. } => "upright-height",
            BranchRule::FlatQuarter3Case { .. } => "flat-quarter-3case",
            BranchRule::TypeA3Case { .. } => "typeA-3case",
            BranchRule::QuadDiagonal { .. } => "quad-diagonal",
        }
    }

    pub fn triangle(face: usize) -> BranchRule {
        BranchRule::TriangleYSum {
            face,
            split: constants().branch_params["triangle-ysum"].value,
        }
    }

    pub fn upright(diag: &str, anchors: &[&str]) -> BranchRule {
        let p = &constants().branch_params;
        BranchRule::UprightHeight {
            diag: diag.into(),
            anchors: anchors.iter().map(|s| s.to_string()).collect(),
            split: p["upright-height"].value,
            anchor: p["anchor"].value,
        }
    }

    pub fn flat_quarter(diag: &str) -> BranchRule {
        BranchRule::FlatQuarter3Case {
            diag: diag.into(),
            split: constants().branch_params["flat-diagonal"].value,
        }
    }

    pub fn type_a(y5: &str, y6: &str) -> BranchRule {
        BranchRule::TypeA3Case {
            y5: y5.into(),
            y6: y6.into(),
            split: constants().branch_params["type-a-edge"].value,
        }
    }

    pub fn quad_diagonal(diag: &str) -> BranchRule {
        BranchRule::QuadDiagonal {
            diag: diag.into(),
            lo: 8f64.sqrt(),
            hi: constants().branch_params["quad-diagonal"].value,
        }
    }
}

impl fmt::Display for BranchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchRule::TriangleYSum { face, .. } => write!(f, "triangle-ysum {face}"),
            BranchRule::Quad4Case { face } => write!(f, "quad-4case {face}"),
            BranchRule::UprightHeight { diag, anchors, .. } => {
                write!(f, "upright-height {diag}")?;
                for a in anchors {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            BranchRule::FlatQuarter3Case { diag, .. } => write!(f, "flat-quarter-3case {diag}"),
            BranchRule::TypeA3Case { y5, y6, .. } => write!(f, "typeA-3case {y5} {y6}"),
            BranchRule::QuadDiagonal { diag, .. } => write!(f, "quad-diagonal {diag}"),
        }
    }
}

/// One child: its case label and the rows it adds, given by variable name.
type Case = (String, Vec<(Vec<(String, f64)>, Rel, f64)>);

fn le(v: &str, x: f64) -> (Vec<(String, f64)>, Rel, f64) {
    (vec![(v.to_string(), 1.0)], Rel::Le, x)
}

fn ge(v: &str, x: f64) -> (Vec<(String, f64)>, Rel, f64) {
    (vec![(v.to_string(), 1.0)], Rel::Ge, x)
}

/// Vertex ids of face `f`, recovered from the `alpha.v.f` variables.
fn face_vertices(m: &LpModel, f: usize) -> Vec<usize> {
    let suffix = format!(".{f}");
    m.vars
        .iter()
        .filter_map(|v| {
            let rest = v.name.strip_prefix("alpha.")?.strip_suffix(&suffix)?;
            rest.parse().ok()
        })
        .collect()
}

fn eta(name: &str) -> String {
    format!("eta.{name}")
}

/// Auxiliary variables a rule introduces, with their bounds.
fn auxiliary(m: &LpModel, rule: &BranchRule) -> Result<Vec<(String, f64, f64)>, LpError> {
    let four_t0 = 4.0 * constants().t0.value;
    let need = |n: &str| m.var_or_err(n).map(|_| ());
    let face = |f: usize, len: usize| -> Result<Vec<usize>, LpError> {
        need(&sigma_name(f))?;
        let mut vs = face_vertices(m, f);
        vs.sort_unstable();
        if vs.len() != len {
            return Err(LpError::Branch(format!(
                "{} needs a face of length {len}, face {f} has {}",
                rule.kind(),
                vs.len()
            )));
        }
        Ok(vs)
    };
    Ok(match rule {
        BranchRule::TriangleYSum { face: f, .. } => {
            for v in face(*f, 3)? {
                need(&y_name(v))?;
            }
            vec![]
        }
        BranchRule::Quad4Case { face: f } => {
            face(*f, 4)?;
            vec![
                (format!("diag.{f}.a"), 0.0, four_t0),
                (format!("diag.{f}.b"), 0.0, four_t0),
                (format!("center.{f}"), 0.0, four_t0),
            ]
        }
        BranchRule::UprightHeight { diag, anchors, .. } => {
            need(diag)?;
            for a in anchors {
                need(a)?;
            }
            vec![]
        }
        BranchRule::FlatQuarter3Case { diag, .. } => {
            need(diag)?;
            vec![(eta(diag), 0.0, f64::INFINITY)]
        }
        BranchRule::TypeA3Case { y5, y6, .. } => {
            need(y5)?;
            need(y6)?;
            vec![(eta(&format!("{y5}.{y6}")), 0.0, f64::INFINITY)]
        }
        BranchRule::QuadDiagonal { diag, .. } => {
            need(diag)?;
            vec![]
        }
    })
}

fn cases(m: &LpModel, rule: &BranchRule) -> Vec<Case> {
    let r2 = 2f64.sqrt();
    let r8 = 8f64.sqrt();
    match rule {
        BranchRule::TriangleYSum { face, split } => {
            let mut vs = face_vertices(m, *face);
            vs.sort_unstable();
            let sum: Vec<(String, f64)> = vs.iter().map(|&v| (y_name(v), 1.0)).collect();
            vec![
                ("le".into(), vec![(sum.clone(), Rel::Le, *split)]),
                ("ge".into(), vec![(sum, Rel::Ge, *split)]),
            ]
        }
        BranchRule::Quad4Case { face } => {
            let (a, b, c) = (format!("diag.{face}.a"), format!("diag.{face}.b"), format!("center.{face}"));
            vec![
                ("flat-a".into(), vec![le(&a, r8)]),
                ("flat-b".into(), vec![ge(&a, r8), le(&b, r8)]),
                ("upright".into(), vec![ge(&a, r8), ge(&b, r8), le(&c, r8)]),
                ("none".into(), vec![ge(&a, r8), ge(&b, r8), ge(&c, r8)]),
            ]
        }
        BranchRule::UprightHeight {
            diag,
            anchors,
            split,
            anchor,
        } => {
            let mut out = vec![("low".to_string(), vec![le(diag, *split)])];
            for mask in 0..1u64 << anchors.len() {
                let mut rows = vec![ge(diag, *split)];
                let mut label = String::from("high");
                for (i, a) in anchors.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        rows.push(ge(a, *anchor));
                        label.push('+');
                    } else {
                        rows.push(le(a, *anchor));
                        label.push('-');
                    }
                }
                out.push((label, rows));
            }
            out
        }
        BranchRule::FlatQuarter3Case { diag, split } => {
            let e = eta(diag);
            vec![
                ("compression".into(), vec![le(diag, *split), le(&e, r2)]),
                ("short-wide".into(), vec![le(diag, *split), ge(&e, r2)]),
                ("long".into(), vec![ge(diag, *split)]),
            ]
        }
        BranchRule::TypeA3Case { y5, y6, split } => {
            let e = eta(&format!("{y5}.{y6}"));
            vec![
                ("type-a".into(), vec![le(y5, *split), le(y6, *split), le(&e, r2)]),
                ("long-y6".into(), vec![ge(y6, *split)]),
                ("long-y5".into(), vec![ge(y5, *split)]),
                ("short-wide".into(), vec![le(y5, *split), le(y6, *split), ge(&e, r2)]),
            ]
        }
        BranchRule::QuadDiagonal { diag, lo, hi } => vec![
            ("below".into(), vec![le(diag, *lo)]),
            ("inside".into(), vec![ge(diag, *lo), le(diag, *hi)]),
            ("above".into(), vec![ge(diag, *hi)]),
        ],
    }
}

/// Splits `m` by `rule`. Each child carries the rows of its case with
/// provenance `branch:<rule>:<case>`.
pub fn branch(m: &LpModel, rule: &BranchRule) -> Result<Vec<(String, LpModel)>, LpError> {
    let aux = auxiliary(m, rule)?;
    let mut out = Vec::new();
    for (case, rows) in cases(m, rule) {
        let mut c = m.clone();
        for (n, lo, hi) in &aux {
            c.add_var(n, *lo, *hi);
        }
        let tag = format!("branch:{}:{case}", rule.kind());
        for (coefs, rel, rhs) in rows {
            let named: Vec<(&str, f64)> = coefs.iter().map(|(n, a)| (n.as_str(), *a)).collect();
            c.add_named_row(&named, rel, rhs, tag.clone())?;
        }
        out.push((tag, c));
    }
    Ok(out)
}

/// Whether a rule was already applied along the path to `m`.
pub fn applied(m: &LpModel, rule: &BranchRule) -> bool {
    let target = match rule {
        BranchRule::TriangleYSum { face, .. } => {
            let mut vs = face_vertices(m, *face);
            vs.sort_unstable();
            vs.iter().map(|&v| y_name(v)).collect::<Vec<_>>()
        }
        _ => return false,
    };
    m.rows.iter().any(|r| {
        r.provenance.starts_with("branch:triangle-ysum:")
            && r.coefs.len() == target.len()
            && r.coefs.iter().all(|&(j, _)| target.contains(&m.vars[j].name))
    })
}

/// The two diagonals of a quadrilateral face, as edge variable names.
pub fn quad_diagonals(m: &LpModel, face: usize) -> Option<(String, String)> {
    let vs = face_vertices(m, face);
    (vs.len() == 4).then(|| (e_name(vs[0], vs[2]), e_name(vs[1], vs[3])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::relaxation::build_relaxation;
    use crate::lp::IneqDb;
    use crate::planegraph::catalog;

    fn cuboct() -> LpModel {
        build_relaxation(&catalog::cuboctahedron(), &IneqDb::default()).unwrap()
    }

    #[test]
    fn triangle_two_children() {
        let g = catalog::cuboctahedron();
        let m = cuboct();
        let f = (0..g.face_count()).find(|&f| g.face(f).len() == 3).unwrap();
        let kids = branch(&m, &BranchRule::triangle(f)).unwrap();
        assert_eq!(kids.len(), 2);
        let want: Vec<String> = {
            let mut v = g.face(f).to_vec();
            v.sort_unstable();
            v.into_iter().map(y_name).collect()
        };
        for ((tag, c), rel) in kids.iter().zip([Rel::Le, Rel::Ge]) {
            let r = c.rows.last().unwrap();
            assert_eq!(&r.provenance, tag);
            assert_eq!((r.rel, r.rhs), (rel, 6.25));
            let names: Vec<String> = r.coefs.iter().map(|&(j, _)| c.vars[j].name.clone()).collect();
            assert_eq!(names, want);
            assert!(applied(c, &BranchRule::triangle(f)));
        }
        assert!(!applied(&m, &BranchRule::triangle(f)));
    }

    #[test]
    fn quad_four_children() {
        let g = catalog::cuboctahedron();
        let m = cuboct();
        let f = (0..g.face_count()).find(|&f| g.face(f).len() == 4).unwrap();
        let kids = branch(&m, &BranchRule::Quad4Case { face: f }).unwrap();
        let tags: Vec<&str> = kids.iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(
            tags,
            [
                "branch:quad-4case:flat-a",
                "branch:quad-4case:flat-b",
                "branch:quad-4case:upright",
                "branch:quad-4case:none"
            ]
        );
        assert!(branch(&m, &BranchRule::Quad4Case { face: 0 }).is_err() || g.face(0).len() == 4);
    }

    #[test]
    fn upright_cases_cover() {
        let m = cuboct();
        let g = catalog::cuboctahedron();
        let w = g.faces_at(0).iter().map(|&f| g.face(f)).find_map(|f| f.iter().copied().find(|&w| w != 0 && g.has_edge(0, w))).unwrap();
        let kids = branch(&m, &BranchRule::upright("y.0", &["y.1", &e_name(0, w)])).unwrap();
        assert_eq!(kids.len(), 5);
        assert_eq!(kids[0].0, "branch:upright-height:low");
        assert_eq!(kids[4].0, "branch:upright-height:high++");
    }

    #[test]
    fn absent_variables_rejected() {
        let m = cuboct();
        for rule in [
            BranchRule::upright("y.99", &[]),
            BranchRule::flat_quarter("nope"),
            BranchRule::type_a("y.0", "y.404"),
            BranchRule::quad_diagonal("e.0.404"),
            BranchRule::triangle(404),
        ] {
            assert!(matches!(branch(&m, &rule), Err(LpError::UnknownVariable(_))), "{rule}");
        }
    }

    #[test]
    fn children_do_not_exceed_parent() {
        let m = cuboct();
        let parent = m.solve().unwrap().bound();
        for rule in [
            BranchRule::triangle(0),
            BranchRule::upright("y.0", &["y.1"]),
            BranchRule::flat_quarter("y.5"),
            BranchRule::type_a("y.2", "y.3"),
            BranchRule::quad_diagonal("y.4"),
        ] {
            let Ok(kids) = branch(&m, &rule) else { continue };
            for (_, c) in kids {
                assert!(c.solve().unwrap().bound() <= parent + 1e-9);
            }
        }
    }
}
