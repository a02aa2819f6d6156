//! LP text export in the common `Maximize / Subject To / Bounds / End`
//! layout, and a reader for the same subset.
//!
//! Row provenance and model notes travel in `\` comment lines so a parsed
//! export is structurally equal to the model that produced it.

use super::model::{LpError, LpModel};
use super::simplex::Rel;

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn terms(m: &LpModel, coefs: &[(usize, f64)]) -> String {
    if coefs.is_empty() {
        return " 0".into();
    }
    let mut s = String::new();
    for &(j, a) in coefs {
        if a < 0.0 || (a == 0.0 && a.is_sign_negative()) {
            s.push_str(&format!(" - {} {}", num(-a), m.vars[j].name));
        } else {
            s.push_str(&format!(" + {} {}", num(a), m.vars[j].name));
        }
    }
    s
}

pub fn to_lp_text(m: &LpModel) -> String {
    let mut s = String::new();
    s.push_str(&format!("\\ model {}\n", m.name));
    for (k, v) in &m.notes {
        s.push_str(&format!("\\ note {k} {v}\n"));
    }
    s.push_str("Maximize\n");
    s.push_str(&format!(" obj:{}\n", terms(m, &m.objective)));
    s.push_str("Subject To\n");
    for r in &m.rows {
        s.push_str(&format!("\\ prov {} {}\n", r.name, r.provenance));
        s.push_str(&format!(
            " {}:{} {} {}\n",
            r.name,
            terms(m, &r.coefs),
            r.rel.symbol(),
            num(r.rhs)
        ));
    }
    s.push_str("Bounds\n");
    for v in &m.vars {
        if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            s.push_str(&format!(" {} free\n", v.name));
        } else {
            s.push_str(&format!(" {} <= {} <= {}\n", num(v.lower), v.name, num(v.upper)));
        }
    }
    s.push_str("End\n");
    s
}

fn parse_num(tok: &str, line: usize) -> Result<f64, LpError> {
    match tok {
        "+inf" | "inf" | "+infinity" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => tok.parse().map_err(|_| LpError::Parse {
            line,
            msg: format!("bad number `{tok}`"),
        }),
    }
}

#[derive(PartialEq)]
enum Section {
    Head,
    Objective,
    Rows,
    Bounds,
    Done,
}

/// Parses `tokens` as `[sign] coef name` terms. Variables are declared on
/// first sight with default bounds `[0, +inf)`.
fn parse_terms(
    m: &mut LpModel,
    toks: &[&str],
    line: usize,
) -> Result<Vec<(usize, f64)>, LpError> {
    let mut out = Vec::new();
    let mut i = 0;
    if toks == ["0"] {
        return Ok(out);
    }
    while i < toks.len() {
        let sign = match toks[i] {
            "+" => 1.0,
            "-" => -1.0,
            t => {
                return Err(LpError::Parse {
                    line,
                    msg: format!("expected `+` or `-`, found `{t}`"),
                })
            }
        };
        let (c, name) = match (toks.get(i + 1), toks.get(i + 2)) {
            (Some(c), Some(n)) => (parse_num(c, line)?, *n),
            _ => {
                return Err(LpError::Parse {
                    line,
                    msg: "truncated term".into(),
                })
            }
        };
        let j = match m.var(name) {
            Some(j) => j,
            None => m.add_var(name, 0.0, f64::INFINITY),
        };
        out.push((j, sign * c));
        i += 3;
    }
    Ok(out)
}

pub fn parse_lp_text(text: &str) -> Result<LpModel, LpError> {
    let mut m = LpModel::new("");
    let mut sec = Section::Head;
    let mut prov: Option<(String, String)> = None;
    let mut bounds: Vec<(String, f64, f64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('\\') {
            let c = c.trim_start();
            if let Some(n) = c.strip_prefix("model ") {
                m.name = n.to_string();
            } else if c == "model" {
                m.name.clear();
            } else if let Some(rest) = c.strip_prefix("note ") {
                let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                m.notes.push((k.to_string(), v.to_string()));
            } else if let Some(rest) = c.strip_prefix("prov ") {
                let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                prov = Some((k.to_string(), v.to_string()));
            }
            continue;
        }
        match t {
            "Maximize" => {
                sec = Section::Objective;
                continue;
            }
            "Subject To" => {
                sec = Section::Rows;
                continue;
            }
            "Bounds" => {
                sec = Section::Bounds;
                continue;
            }
            "End" => {
                sec = Section::Done;
                continue;
            }
            _ => {}
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        match sec {
            Section::Objective => {
                let body = toks
                    .split_first()
                    .filter(|(h, _)| h.ends_with(':'))
                    .map(|(_, r)| r)
                    .ok_or(LpError::Parse {
                        line,
                        msg: "expected `obj:`".into(),
                    })?;
                let o = parse_terms(&mut m, body, line)?;
                m.objective = o;
            }
            Section::Rows => {
                let (name, body) = toks.split_first().ok_or(LpError::Parse {
                    line,
                    msg: "empty row".into(),
                })?;
                let name = name.strip_suffix(':').ok_or(LpError::Parse {
                    line,
                    msg: "expected `name:`".into(),
                })?;
                if body.len() < 2 {
                    return Err(LpError::Parse {
                        line,
                        msg: "row needs a relation and right-hand side".into(),
                    });
                }
                let rel = match body[body.len() - 2] {
                    "<=" => Rel::Le,
                    ">=" => Rel::Ge,
                    "=" => Rel::Eq,
                    r => {
                        return Err(LpError::Parse {
                            line,
                            msg: format!("bad relation `{r}`"),
                        })
                    }
                };
                let rhs = parse_num(body[body.len() - 1], line)?;
                let coefs = parse_terms(&mut m, &body[..body.len() - 2], line)?;
                let provenance = match prov.take() {
                    Some((n, p)) if n == name => p,
                    _ => "derived".to_string(),
                };
                let i = m.rows.len();
                m.rows.push(super::model::Row {
                    name: name.to_string(),
                    coefs,
                    rel,
                    rhs,
                    provenance,
                });
                debug_assert_eq!(m.rows.len(), i + 1);
            }
            Section::Bounds => match toks.as_slice() {
                [name, "free"] => bounds.push((name.to_string(), f64::NEG_INFINITY, f64::INFINITY)),
                [lo, "<=", name, "<=", hi] => {
                    bounds.push((name.to_string(), parse_num(lo, line)?, parse_num(hi, line)?))
                }
                _ => {
                    return Err(LpError::Parse {
                        line,
                        msg: "unrecognized bound".into(),
                    })
                }
            },
            Section::Head | Section::Done => {
                return Err(LpError::Parse {
                    line,
                    msg: format!("unexpected `{t}`"),
                })
            }
        }
    }
    // Bounds also fix declaration order for variables that appear only there.
    let mut ordered = LpModel::new(m.name.clone());
    ordered.notes = m.notes.clone();
    let mut remap = vec![usize::MAX; m.vars.len()];
    for (name, lo, hi) in &bounds {
        let j = ordered.add_var(name, f64::NEG_INFINITY, f64::INFINITY);
        ordered.vars[j].lower = *lo;
        ordered.vars[j].upper = *hi;
        if let Some(old) = m.var(name) {
            remap[old] = j;
        }
    }
    for (old, v) in m.vars.iter().enumerate() {
        if remap[old] == usize::MAX {
            remap[old] = ordered.add_var(&v.name, v.lower, v.upper);
        }
    }
    ordered.objective = m.objective.iter().map(|&(j, a)| (remap[j], a)).collect();
    ordered.rows = m
        .rows
        .into_iter()
        .map(|mut r| {
            r.coefs = r.coefs.into_iter().map(|(j, a)| (remap[j], a)).collect();
            r
        })
        .collect();
    Ok(ordered)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_structure() {
        let mut m = LpModel::new("demo");
        let x = m.add_var("x", 0.0, 1.5);
        let y = m.add_var("y", f64::NEG_INFINITY, f64::INFINITY);
        let z = m.add_var("z", -2.0, f64::INFINITY);
        m.add_row(vec![(x, 1.0), (y, -0.1)], Rel::Le, 3.0, "db:12");
        m.add_row(vec![(z, 2.5)], Rel::Ge, -1.0, "branch:triangle-ysum:le");
        m.add_row(vec![(x, 1.0), (z, 1.0)], Rel::Eq, 0.30000000000000004, "identity:sol");
        m.set_objective(vec![(x, 1.0), (z, -1.0)]);
        m.set_note("y-lower", "2");
        let text = to_lp_text(&m);
        let back = parse_lp_text(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(to_lp_text(&back), text);
    }

    #[test]
    fn parse_error_line() {
        let e = parse_lp_text("Maximize\n obj: + 1 x\nSubject To\n r0: + 1 x <> 3\n").unwrap_err();
        assert!(matches!(e, LpError::Parse { line: 4, .. }));
    }
}
