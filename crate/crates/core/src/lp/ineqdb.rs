//! Inequality templates, one s-expression per line:
//!
//! ```text
//! (const name value)
//! (policy key value)
//! (row id (ctx kind args...) (lhs (coef role value)...) (rel <=) (rhs value) (cite "anchor"))
//! ```
//!
//! A value is a decimal, a name (a `const` above it or a table scalar such as
//! `pt`), or a call: `(mul ..)`, `(add ..)`, `(sub a b)`, `(div a b)`,
//! `(neg a)`, or a table lookup `(d n)`, `(c n)`, `(t n)`, `(s n)`,
//! `(b p q)`, `(a k)`, `(D n k)`, `(Z n k)`, `(delta-loop n k)`,
//! `(z-loop n k)`, `(xi g v)`.

use std::collections::HashMap;
use std::fmt;

use crate::constants::{constants, Penalty};
use crate::sexpr::{emit_document, parse_document, ParseError, SExpr, TopLevel};

use super::model::LpError;
use super::simplex::Rel;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(String),
    Name(String),
    Call(String, Vec<Value>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceSel {
    Len(usize),
    Exceptional,
    Any,
}

impl FaceSel {
    pub fn matches(self, len: usize) -> bool {
        match self {
            FaceSel::Len(n) => n == len,
            FaceSel::Exceptional => len >= 5,
            FaceSel::Any => true,
        }
    }
}

/// Where a template is instantiated, and which roles it may use.
#[derive(Debug, Clone, PartialEq)]
pub enum Ctx {
    /// Once per graph. Roles `sigma`, `tau`, `sol` sum over all faces.
    Graph,
    /// Once per face. Roles `sigma`, `tau`, `sol`, and sums `y`, `e`, `alpha`.
    Face(FaceSel),
    /// Once per angle `(v, F)`. Roles `alpha`, `y`, `sigma`, `tau`, `sol`.
    Angle(FaceSel),
    /// Once per vertex of matching type (`None` matches anything). Roles
    /// `y`, and sums `sigma`, `tau` over the faces at the vertex.
    Vertex { p: Option<u32>, q: Option<u32>, r: Option<u32> },
    /// Once per refinement face with this role tag. Roles `sc`, `tausc`,
    /// `sol`, `y` (sum), `penalty`.
    Refine(String),
}

impl Ctx {
    pub fn roles(&self) -> &'static [&'static str] {
        match self {
            Ctx::Graph => &["sigma", "tau", "sol"],
            Ctx::Face(_) => &["sigma", "tau", "sol", "y", "e", "alpha"],
            Ctx::Angle(_) => &["alpha", "y", "sigma", "tau", "sol"],
            Ctx::Vertex { .. } => &["y", "sigma", "tau"],
            Ctx::Refine(_) => &["sc", "tausc", "sol", "y", "penalty"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub id: String,
    pub ctx: Ctx,
    pub lhs: Vec<(String, Value)>,
    pub rel: Rel,
    pub rhs: Value,
    pub cite: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Comment(String),
    Const(String, Value),
    Policy(String, String),
    Row(Template),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IneqDb {
    pub items: Vec<Item>,
}

fn syntax(e: ParseError) -> LpError {
    LpError::DbSyntax {
        line: e.pos.line,
        col: e.pos.col,
        msg: e.msg,
    }
}

fn err_at(e: &SExpr, msg: impl Into<String>) -> LpError {
    syntax(ParseError::new(e.pos(), msg))
}

fn parse_value(e: &SExpr) -> Result<Value, LpError> {
    match e {
        SExpr::Atom(a, _) => {
            if a.parse::<f64>().is_ok() {
                Ok(Value::Num(a.clone()))
            } else {
                Ok(Value::Name(a.clone()))
            }
        }
        SExpr::List(items, _) if !items.is_empty() => {
            let f = items[0].expect_atom("function name").map_err(syntax)?;
            let args = items[1..].iter().map(parse_value).collect::<Result<_, _>>()?;
            Ok(Value::Call(f.to_string(), args))
        }
        _ => Err(err_at(e, "expected value")),
    }
}

fn value_sexpr(v: &Value) -> SExpr {
    match v {
        Value::Num(s) | Value::Name(s) => SExpr::atom(s.clone()),
        Value::Call(f, args) => {
            let mut items = vec![SExpr::atom(f.clone())];
            items.extend(args.iter().map(value_sexpr));
            SExpr::list(items)
        }
    }
}

fn parse_sel(e: &SExpr) -> Result<FaceSel, LpError> {
    match e.expect_atom("face selector").map_err(syntax)? {
        "exceptional" => Ok(FaceSel::Exceptional),
        "any" => Ok(FaceSel::Any),
        s => s
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 3)
            .map(FaceSel::Len)
            .ok_or_else(|| err_at(e, format!("bad face selector `{s}`"))),
    }
}

fn sel_atom(s: FaceSel) -> SExpr {
    SExpr::atom(match s {
        FaceSel::Len(n) => n.to_string(),
        FaceSel::Exceptional => "exceptional".into(),
        FaceSel::Any => "any".into(),
    })
}

fn parse_ctx(e: &SExpr) -> Result<Ctx, LpError> {
    let items = e.expect_list("(ctx ...)").map_err(syntax)?;
    if items.len() < 2 || items[0].as_atom() != Some("ctx") {
        return Err(err_at(e, "expected (ctx kind ...)"));
    }
    let kind = items[1].expect_atom("context kind").map_err(syntax)?;
    let arg = |i: usize| items.get(i).ok_or_else(|| err_at(e, format!("`{kind}` needs more arguments")));
    let ctx = match kind {
        "graph" => Ctx::Graph,
        "face" => Ctx::Face(parse_sel(arg(2)?)?),
        "angle" => Ctx::Angle(parse_sel(arg(2)?)?),
        "vertex" => {
            let wild = |x: &SExpr| -> Result<Option<u32>, LpError> {
                match x.expect_atom("count").map_err(syntax)? {
                    "_" => Ok(None),
                    s => s.parse().map(Some).map_err(|_| err_at(x, format!("bad count `{s}`"))),
                }
            };
            Ctx::Vertex {
                p: wild(arg(2)?)?,
                q: wild(arg(3)?)?,
                r: wild(arg(4)?)?,
            }
        }
        "refine" => Ctx::Refine(arg(2)?.expect_atom("role").map_err(syntax)?.to_string()),
        k => return Err(err_at(&items[1], format!("unknown context `{k}`"))),
    };
    Ok(ctx)
}

fn ctx_sexpr(c: &Ctx) -> SExpr {
    let a = |s: &str| SExpr::atom(s);
    let mut items = vec![a("ctx")];
    match c {
        Ctx::Graph => items.push(a("graph")),
        Ctx::Face(s) => items.extend([a("face"), sel_atom(*s)]),
        Ctx::Angle(s) => items.extend([a("angle"), sel_atom(*s)]),
        Ctx::Vertex { p, q, r } => {
            items.push(a("vertex"));
            for x in [p, q, r] {
                items.push(a(&x.map_or("_".to_string(), |n| n.to_string())));
            }
        }
        Ctx::Refine(role) => items.extend([a("refine"), a(role)]),
    }
    SExpr::list(items)
}

fn parse_rel(e: &SExpr) -> Result<Rel, LpError> {
    match e.expect_atom("relation").map_err(syntax)? {
        "<=" => Ok(Rel::Le),
        ">=" => Ok(Rel::Ge),
        "=" => Ok(Rel::Eq),
        s => Err(err_at(e, format!("bad relation `{s}`"))),
    }
}

/// The list's items after the head `name`, which must match.
fn section<'a>(e: &'a SExpr, name: &str) -> Result<&'a [SExpr], LpError> {
    let items = e.expect_list(name).map_err(syntax)?;
    if items.first().and_then(SExpr::as_atom) != Some(name) {
        return Err(err_at(e, format!("expected ({name} ...)")));
    }
    Ok(&items[1..])
}

fn parse_row(e: &SExpr, items: &[SExpr]) -> Result<Template, LpError> {
    if items.len() != 7 {
        return Err(err_at(e, "row needs id, ctx, lhs, rel, rhs and cite"));
    }
    let id = items[1].expect_atom("row id").map_err(syntax)?.to_string();
    let ctx = parse_ctx(&items[2])?;
    let mut lhs = Vec::new();
    for c in section(&items[3], "lhs")? {
        let parts = section(c, "coef")?;
        if parts.len() != 2 {
            return Err(err_at(c, "expected (coef role value)"));
        }
        let role = parts[0].expect_atom("role").map_err(syntax)?;
        if !ctx.roles().contains(&role) {
            return Err(err_at(&parts[0], format!("role `{role}` not available in this context")));
        }
        lhs.push((role.to_string(), parse_value(&parts[1])?));
    }
    let rel = match section(&items[4], "rel")? {
        [r] => parse_rel(r)?,
        _ => return Err(err_at(&items[4], "expected (rel op)")),
    };
    let rhs = match section(&items[5], "rhs")? {
        [v] => parse_value(v)?,
        _ => return Err(err_at(&items[5], "expected (rhs value)")),
    };
    let cite = match section(&items[6], "cite")? {
        [s] => s.expect_str("citation string").map_err(syntax)?.to_string(),
        _ => return Err(err_at(&items[6], "expected (cite \"...\")")),
    };
    Ok(Template {
        id,
        ctx,
        lhs,
        rel,
        rhs,
        cite,
    })
}

fn row_sexpr(t: &Template) -> SExpr {
    let a = |s: &str| SExpr::atom(s);
    let mut lhs = vec![a("lhs")];
    for (role, v) in &t.lhs {
        lhs.push(SExpr::list(vec![a("coef"), a(role), value_sexpr(v)]));
    }
    SExpr::list(vec![
        a("row"),
        a(&t.id),
        ctx_sexpr(&t.ctx),
        SExpr::list(lhs),
        SExpr::list(vec![a("rel"), a(t.rel.symbol())]),
        SExpr::list(vec![a("rhs"), value_sexpr(&t.rhs)]),
        SExpr::list(vec![a("cite"), SExpr::string(t.cite.clone())]),
    ])
}

impl IneqDb {
    pub fn parse(text: &str) -> Result<IneqDb, LpError> {
        let mut items = Vec::new();
        for top in parse_document(text).map_err(syntax)? {
            let form = match top {
                TopLevel::Comment(c) => {
                    items.push(Item::Comment(c));
                    continue;
                }
                TopLevel::Form(f) => f,
            };
            let list = form.expect_list("top-level form").map_err(syntax)?;
            let item = match form.head() {
                Some("const") if list.len() == 3 => Item::Const(
                    list[1].expect_atom("constant name").map_err(syntax)?.to_string(),
                    parse_value(&list[2])?,
                ),
                Some("policy") if list.len() == 3 => Item::Policy(
                    list[1].expect_atom("policy key").map_err(syntax)?.to_string(),
                    list[2].expect_atom("policy value").map_err(syntax)?.to_string(),
                ),
                Some("row") => Item::Row(parse_row(&form, list)?),
                _ => return Err(err_at(&form, "expected const, policy or row")),
            };
            items.push(item);
        }
        let db = IneqDb { items };
        db.constants()?;
        Ok(db)
    }

    pub fn emit(&self) -> String {
        let a = |s: &str| SExpr::atom(s);
        let doc: Vec<TopLevel> = self
            .items
            .iter()
            .map(|it| match it {
                Item::Comment(c) => TopLevel::Comment(c.clone()),
                Item::Const(n, v) => TopLevel::Form(SExpr::list(vec![a("const"), a(n), value_sexpr(v)])),
                Item::Policy(k, v) => TopLevel::Form(SExpr::list(vec![a("policy"), a(k), a(v)])),
                Item::Row(t) => TopLevel::Form(row_sexpr(t)),
            })
            .collect();
        emit_document(&doc)
    }

    pub fn rows(&self) -> impl Iterator<Item = &Template> {
        self.items.iter().filter_map(|i| match i {
            Item::Row(t) => Some(t),
            _ => None,
        })
    }

    pub fn policy(&self, key: &str) -> Option<&str> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Policy(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    /// Every `const`, evaluated in file order.
    pub fn constants(&self) -> Result<HashMap<String, f64>, LpError> {
        let mut env = HashMap::new();
        for it in &self.items {
            if let Item::Const(n, v) = it {
                let x = eval(v, &env).map_err(|msg| LpError::DbContext {
                    id: format!("const {n}"),
                    msg,
                })?;
                env.insert(n.clone(), x);
            }
        }
        Ok(env)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", value_sexpr(self))
    }
}

/// Evaluates `v` with `env` holding the file's constants.
pub fn eval(v: &Value, env: &HashMap<String, f64>) -> Result<f64, String> {
    let t = constants();
    match v {
        Value::Num(s) => s.parse().map_err(|_| format!("bad number `{s}`")),
        Value::Name(n) => env
            .get(n)
            .copied()
            .or_else(|| t.named(n))
            .ok_or_else(|| format!("unknown name `{n}`")),
        Value::Call(f, args) => {
            let xs = args.iter().map(|a| eval(a, env)).collect::<Result<Vec<f64>, _>>()?;
            let arity = |k: usize| {
                if xs.len() == k {
                    Ok(())
                } else {
                    Err(format!("`{f}` takes {k} arguments, got {}", xs.len()))
                }
            };
            let int = |x: f64| -> Result<i64, String> {
                if x.fract() == 0.0 {
                    Ok(x as i64)
                } else {
                    Err(format!("`{f}` needs integer arguments"))
                }
            };
            let table = |r: Result<f64, crate::constants::ConstantsError>| r.map_err(|e| e.to_string());
            let pair = |m: &std::collections::BTreeMap<(u32, u32), crate::constants::Dec>| -> Result<f64, String> {
                let key = (int(xs[0])? as u32, int(xs[1])? as u32);
                m.get(&key).map(|d| d.value).ok_or_else(|| format!("`{f}` has no entry {key:?}"))
            };
            let single = |m: &std::collections::BTreeMap<usize, crate::constants::Dec>| -> Result<f64, String> {
                let n = int(xs[0])? as usize;
                m.get(&n).map(|d| d.value).ok_or_else(|| format!("`{f}` has no entry {n}"))
            };
            match f.as_str() {
                "mul" => Ok(xs.iter().product()),
                "add" => Ok(xs.iter().sum()),
                "sub" => arity(2).map(|_| xs[0] - xs[1]),
                "div" => arity(2).map(|_| xs[0] / xs[1]),
                "neg" => arity(1).map(|_| -xs[0]),
                "d" => arity(1).and_then(|_| table(t.d_of(int(xs[0])? as usize))),
                "c" => arity(1).and_then(|_| table(t.c_of(int(xs[0])? as usize))),
                "t" => arity(1).and_then(|_| single(&t.t_n)),
                "s" => arity(1).and_then(|_| single(&t.s_n)),
                "b" => arity(2).and_then(|_| Ok(t.b_of(int(xs[0])? as u32, int(xs[1])? as u32))),
                "a" => arity(1).and_then(|_| Ok(t.a_of(int(xs[0])? as u32))),
                "D" => arity(2).and_then(|_| table(t.big_d(int(xs[0])?, int(xs[1])?))),
                "Z" => arity(2).and_then(|_| table(t.big_z(int(xs[0])?, int(xs[1])?))),
                "delta-loop" => arity(2).and_then(|_| pair(&t.delta_loop)),
                "z-loop" => arity(2).and_then(|_| pair(&t.z_loop)),
                "xi" => arity(2).and_then(|_| {
                    let p = Penalty {
                        xi_gamma: int(xs[0])? as u32,
                        xi_v: int(xs[1])? as u32,
                    };
                    Ok(p.value(t))
                }),
                _ => Err(format!("unknown function `{f}`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "; sample\n\
(const half 0.5)\n\
(policy y-lower 2)\n\
(row 100 (ctx face 3) (lhs (coef sigma 1)) (rel <=) (rhs pt) (cite \"toy\"))\n\
(row 101 (ctx vertex 5 0 _) (lhs (coef tau 1)) (rel >=) (rhs (mul (b 5 0) pt)) (cite \"admissible b\"))\n\
(row 102 (ctx angle exceptional) (lhs (coef alpha 1)) (rel >=) (rhs (mul half 2.306)) (cite \"angle\"))\n";

    #[test]
    fn roundtrip() {
        let db = IneqDb::parse(SAMPLE).unwrap();
        assert_eq!(db.emit(), SAMPLE);
        assert_eq!(db.rows().count(), 3);
        assert_eq!(db.policy("y-lower"), Some("2"));
    }

    #[test]
    fn values() {
        let db = IneqDb::parse(SAMPLE).unwrap();
        let env = db.constants().unwrap();
        let t = constants();
        let r = db.rows().nth(1).unwrap();
        assert!((eval(&r.rhs, &env).unwrap() - t.b_of(5, 0) * t.pt).abs() < 1e-15);
        let r = db.rows().nth(2).unwrap();
        assert!((eval(&r.rhs, &env).unwrap() - 1.153).abs() < 1e-15);
        let v = parse_value(&crate::sexpr::parse_all("(D 5 1)").unwrap()[0]).unwrap();
        assert_eq!(eval(&v, &env).unwrap(), t.big_d(5, 1).unwrap());
        let v = parse_value(&crate::sexpr::parse_all("(xi 4 2)").unwrap()[0]).unwrap();
        assert!((eval(&v, &env).unwrap() - (4.0 * t.xi_gamma.value + 2.0 * t.xi_v.value)).abs() < 1e-15);
    }

    #[test]
    fn errors_are_located() {
        let e = IneqDb::parse("(row 1 (ctx face 3) (lhs (coef sc 1)) (rel <=) (rhs 0) (cite \"x\"))").unwrap_err();
        assert!(matches!(e, LpError::DbSyntax { line: 1, col: 32, .. }), "{e:?}");
        let e = IneqDb::parse("\n(row 1 (ctx face 2) (lhs) (rel <=) (rhs 0) (cite \"x\"))").unwrap_err();
        assert!(matches!(e, LpError::DbSyntax { line: 2, .. }));
        assert!(IneqDb::parse("(const x (d 2))").is_err());
        assert!(IneqDb::parse("(const x nope)").is_err());
    }
}
