//! Inequality specs over simplex edge lengths.
//!
//! ```text
//! (spec 821707685
//!   (domain (y2 2 2.168) (y3 2 2.168) (y6 2t0 4.678))
//!   (require (>= (eta y4 y5 y6) sqrt2))
//!   (assert (< dih 1.63))
//!   (cite "..."))
//! ```
//!
//! Edges left out of `domain` range over `[2, 2t0]`.

use std::fmt;

use crate::sexpr::{self, ParseError, SExpr, TopLevel};

use super::interval::Interval;
use super::simplex::{self as sx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prim {
    Delta,
    Delta4,
    Dih,
    Dih2,
    Dih3,
    Sol,
    Eta,
    Arc,
}

impl Prim {
    const ALL: [Prim; 8] = [
        Prim::Delta,
        Prim::Delta4,
        Prim::Dih,
        Prim::Dih2,
        Prim::Dih3,
        Prim::Sol,
        Prim::Eta,
        Prim::Arc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prim::Delta => "delta",
            Prim::Delta4 => "delta4",
            Prim::Dih => "dih",
            Prim::Dih2 => "dih2",
            Prim::Dih3 => "dih3",
            Prim::Sol => "sol",
            Prim::Eta => "eta",
            Prim::Arc => "arc",
        }
    }

    fn arity(self) -> usize {
        match self {
            Prim::Eta | Prim::Arc => 3,
            _ => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op1 {
    Neg,
    Sqrt,
    Sq,
    Atan,
    Acos,
}

impl Op1 {
    const ALL: [Op1; 5] = [Op1::Neg, Op1::Sqrt, Op1::Sq, Op1::Atan, Op1::Acos];

    pub fn name(self) -> &'static str {
        match self {
            Op1::Neg => "neg",
            Op1::Sqrt => "sqrt",
            Op1::Sq => "sq",
            Op1::Atan => "atan",
            Op1::Acos => "acos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op2 {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op2 {
    pub fn name(self) -> &'static str {
        match self {
            Op2::Add => "+",
            Op2::Sub => "-",
            Op2::Mul => "*",
            Op2::Div => "/",
        }
    }

    fn parse(s: &str) -> Option<Op2> {
        Some(match s {
            "+" => Op2::Add,
            "-" => Op2::Sub,
            "*" => Op2::Mul,
            "/" => Op2::Div,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Decimal literal, kept as written.
    Num(String),
    /// Named constant: `t0`, `2t0`, `pi`, `sqrt2`, `sqrt8`.
    Const(String),
    /// Edge `y1..y6` as index `0..6`.
    Var(usize),
    Un(Op1, Box<Expr>),
    Bin(Op2, Box<Expr>, Box<Expr>),
    /// A primitive applied to explicit arguments; `dih` written alone means
    /// `(dih y1 y2 y3 y4 y5 y6)`.
    Prim(Prim, Vec<Expr>),
}

const CONSTS: [&str; 5] = ["t0", "2t0", "pi", "sqrt2", "sqrt8"];

fn const_value(name: &str) -> f64 {
    match name {
        "t0" => 1.255,
        "2t0" => 2.51,
        "pi" => std::f64::consts::PI,
        "sqrt2" => std::f64::consts::SQRT_2,
        "sqrt8" => 8f64.sqrt(),
        _ => unreachable!("checked at parse time"),
    }
}

impl Expr {
    pub fn eval<T: Real>(&self, y: &[T; 6]) -> T {
        match self {
            Expr::Num(s) => T::enclose(s.parse().expect("checked at parse time")),
            Expr::Const(c) => T::enclose(const_value(c)),
            Expr::Var(i) => y[*i],
            Expr::Un(op, a) => {
                let a = a.eval(y);
                match op {
                    Op1::Neg => -a,
                    Op1::Sqrt => a.sqrt(),
                    Op1::Sq => a.sq(),
                    Op1::Atan => a.atan(),
                    Op1::Acos => a.acos(),
                }
            }
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(y), b.eval(y));
                match op {
                    Op2::Add => a + b,
                    Op2::Sub => a - b,
                    Op2::Mul => a * b,
                    Op2::Div => a / b,
                }
            }
            Expr::Prim(p, args) => {
                let v: Vec<T> = args.iter().map(|a| a.eval(y)).collect();
                let six = || [v[0], v[1], v[2], v[3], v[4], v[5]];
                match p {
                    Prim::Delta => sx::delta6(six()),
                    Prim::Delta4 => sx::delta4(six()),
                    Prim::Dih => sx::dih(six()),
                    Prim::Dih2 => sx::dih2(six()),
                    Prim::Dih3 => sx::dih3(six()),
                    Prim::Sol => sx::sol(six()),
                    Prim::Eta => sx::eta(v[0], v[1], v[2]),
                    Prim::Arc => sx::arc(v[0], v[1], v[2]),
                }
            }
        }
    }

    /// Edges the expression mentions.
    pub fn vars(&self, out: &mut [bool; 6]) {
        match self {
            Expr::Var(i) => out[*i] = true,
            Expr::Un(_, a) => a.vars(out),
            Expr::Bin(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Prim(_, args) => args.iter().for_each(|a| a.vars(out)),
            Expr::Num(_) | Expr::Const(_) => {}
        }
    }

    pub fn parse(e: &SExpr) -> Result<Expr, ParseError> {
        let err = |msg: String| ParseError::new(e.pos(), msg);
        if let Some(a) = e.as_atom() {
            if let Some(i) = a.strip_prefix('y').and_then(|d| d.parse::<usize>().ok()) {
                if (1..=6).contains(&i) {
                    return Ok(Expr::Var(i - 1));
                }
            }
            if CONSTS.contains(&a) {
                return Ok(Expr::Const(a.into()));
            }
            if let Some(p) = Prim::ALL.iter().find(|p| p.name() == a && p.arity() == 6) {
                return Ok(Expr::Prim(*p, (0..6).map(Expr::Var).collect()));
            }
            return match a.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Expr::Num(a.into())),
                _ => Err(err(format!("unknown symbol `{a}`"))),
            };
        }
        let items = e.expect_list("expression")?;
        let Some((head, args)) = items.split_first() else {
            return Err(err("empty expression".into()));
        };
        let h = head.expect_atom("operator")?;
        let args: Vec<Expr> = args.iter().map(Expr::parse).collect::<Result<_, _>>()?;
        if let Some(op) = Op1::ALL.iter().find(|o| o.name() == h) {
            let [a] = <[Expr; 1]>::try_from(args).map_err(|_| err(format!("`{h}` takes one argument")))?;
            return Ok(Expr::Un(*op, Box::new(a)));
        }
        if let Some(op) = Op2::parse(h) {
            if args.len() == 1 && op == Op2::Sub {
                return Ok(Expr::Un(Op1::Neg, Box::new(args.into_iter().next().unwrap())));
            }
            if args.len() < 2 || (matches!(op, Op2::Sub | Op2::Div) && args.len() != 2) {
                return Err(err(format!("`{h}` has the wrong number of arguments")));
            }
            let mut it = args.into_iter();
            let first = it.next().unwrap();
            return Ok(it.fold(first, |acc, b| Expr::Bin(op, Box::new(acc), Box::new(b))));
        }
        if let Some(p) = Prim::ALL.iter().find(|p| p.name() == h) {
            if args.len() != p.arity() {
                return Err(err(format!("`{h}` takes {} arguments", p.arity())));
            }
            return Ok(Expr::Prim(*p, args));
        }
        Err(err(format!("unknown operator `{h}`")))
    }

    pub fn to_sexpr(&self) -> SExpr {
        match self {
            Expr::Num(s) | Expr::Const(s) => SExpr::atom(s.clone()),
            Expr::Var(i) => SExpr::atom(format!("y{}", i + 1)),
            Expr::Un(op, a) => SExpr::list(vec![SExpr::atom(op.name()), a.to_sexpr()]),
            Expr::Bin(op, a, b) => SExpr::list(vec![SExpr::atom(op.name()), a.to_sexpr(), b.to_sexpr()]),
            Expr::Prim(p, args) => {
                if p.arity() == 6 && args.iter().enumerate().all(|(i, a)| *a == Expr::Var(i)) {
                    return SExpr::atom(p.name());
                }
                let mut v = vec![SExpr::atom(p.name())];
                v.extend(args.iter().map(Expr::to_sexpr));
                SExpr::list(v)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn name(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    fn parse(s: &str) -> Option<Cmp> {
        [Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge].into_iter().find(|c| c.name() == s)
    }

    /// Sign of the margin for a difference `lhs - rhs`: positive means the
    /// comparison holds.
    fn margin(self, d: f64) -> f64 {
        match self {
            Cmp::Lt | Cmp::Le => -d,
            Cmp::Gt | Cmp::Ge => d,
        }
    }

    /// Whether the comparison holds for every value of `d = lhs - rhs`.
    pub fn holds(self, d: Interval) -> bool {
        match self {
            Cmp::Lt => d.hi < 0.0,
            Cmp::Le => d.hi <= 0.0,
            Cmp::Gt => d.lo > 0.0,
            Cmp::Ge => d.lo >= 0.0,
        }
    }

    /// Whether the comparison fails for every value of `d`.
    pub fn fails(self, d: Interval) -> bool {
        match self {
            Cmp::Lt => d.lo >= 0.0,
            Cmp::Le => d.lo > 0.0,
            Cmp::Gt => d.hi <= 0.0,
            Cmp::Ge => d.hi < 0.0,
        }
    }

    /// Smallest margin over `d`.
    pub fn slack(self, d: Interval) -> f64 {
        match self {
            Cmp::Lt | Cmp::Le => self.margin(d.hi),
            Cmp::Gt | Cmp::Ge => self.margin(d.lo),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub cmp: Cmp,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Comparison {
    fn parse(e: &SExpr) -> Result<Comparison, ParseError> {
        let items = e.expect_list("comparison")?;
        let bad = || ParseError::new(e.pos(), "expected (<op> lhs rhs)");
        let [op, l, r] = items else { return Err(bad()) };
        let cmp = Cmp::parse(op.expect_atom("comparison operator")?).ok_or_else(bad)?;
        Ok(Comparison {
            cmp,
            lhs: Expr::parse(l)?,
            rhs: Expr::parse(r)?,
        })
    }

    fn to_sexpr(&self) -> SExpr {
        SExpr::list(vec![SExpr::atom(self.cmp.name()), self.lhs.to_sexpr(), self.rhs.to_sexpr()])
    }

    pub fn difference<T: Real>(&self, y: &[T; 6]) -> T {
        self.lhs.eval(y) - self.rhs.eval(y)
    }
}

/// A bound on one edge, endpoints kept as written.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRange {
    pub edge: usize,
    pub lo: Expr,
    pub hi: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IneqSpec {
    pub id: String,
    pub domain: Vec<EdgeRange>,
    pub require: Vec<Comparison>,
    pub assert: Comparison,
    pub cite: String,
}

impl IneqSpec {
    /// The domain as an outward-rounded box.
    pub fn domain_box(&self) -> [Interval; 6] {
        let dflt = [Interval::point(2.0); 6];
        let mut b = [Interval::new(2.0, 2.51).hull(&Interval::around(2.51)); 6];
        for r in &self.domain {
            let lo = r.lo.eval::<Interval>(&dflt);
            let hi = r.hi.eval::<Interval>(&dflt);
            b[r.edge] = Interval::new(lo.lo, hi.hi);
        }
        b
    }

    /// Edges the assertion or a requirement depends on.
    pub fn used_edges(&self) -> [bool; 6] {
        let mut u = [false; 6];
        self.assert.lhs.vars(&mut u);
        self.assert.rhs.vars(&mut u);
        for r in &self.require {
            r.lhs.vars(&mut u);
            r.rhs.vars(&mut u);
        }
        u
    }

    pub fn parse(e: &SExpr) -> Result<IneqSpec, ParseError> {
        let items = e.expect_list("spec")?;
        if e.head() != Some("spec") || items.len() < 2 {
            return Err(ParseError::new(e.pos(), "expected (spec <id> ...)"));
        }
        let id = items[1].expect_atom("spec id")?.to_string();
        let mut domain = Vec::new();
        let mut require = Vec::new();
        let mut assert = None;
        let mut cite = String::new();
        for it in &items[2..] {
            let parts = it.expect_list("spec clause")?;
            match it.head() {
                Some("domain") => {
                    for d in &parts[1..] {
                        let bad = || ParseError::new(d.pos(), "expected (y<i> lo hi)");
                        let [v, lo, hi] = d.expect_list("edge range")? else { return Err(bad()) };
                        let Ok(Expr::Var(edge)) = Expr::parse(v) else { return Err(bad()) };
                        if domain.iter().any(|r: &EdgeRange| r.edge == edge) {
                            return Err(ParseError::new(d.pos(), format!("edge y{} bounded twice", edge + 1)));
                        }
                        let (lo, hi) = (Expr::parse(lo)?, Expr::parse(hi)?);
                        let mut u = [false; 6];
                        lo.vars(&mut u);
                        hi.vars(&mut u);
                        if u.iter().any(|&b| b) {
                            return Err(ParseError::new(d.pos(), "domain bounds must be constant"));
                        }
                        domain.push(EdgeRange { edge, lo, hi });
                    }
                }
                Some("require") => {
                    for r in &parts[1..] {
                        require.push(Comparison::parse(r)?);
                    }
                }
                Some("assert") => {
                    let [_, c] = parts else {
                        return Err(ParseError::new(it.pos(), "expected (assert <comparison>)"));
                    };
                    assert = Some(Comparison::parse(c)?);
                }
                Some("cite") => {
                    let [_, c] = parts else {
                        return Err(ParseError::new(it.pos(), "expected (cite \"...\")"));
                    };
                    cite = c.expect_str("citation")?.to_string();
                }
                _ => return Err(ParseError::new(it.pos(), "unknown spec clause")),
            }
        }
        let assert = assert.ok_or_else(|| ParseError::new(e.pos(), "spec without assert"))?;
        let spec = IneqSpec {
            id,
            domain,
            require,
            assert,
            cite,
        };
        let dflt = [Interval::point(2.0); 6];
        for r in &spec.domain {
            let (lo, hi) = (r.lo.eval::<Interval>(&dflt), r.hi.eval::<Interval>(&dflt));
            if !(lo.lo <= hi.hi) {
                return Err(ParseError::new(e.pos(), format!("empty range for y{}", r.edge + 1)));
            }
        }
        Ok(spec)
    }

    pub fn to_sexpr(&self) -> SExpr {
        let mut v = vec![SExpr::atom("spec"), SExpr::atom(self.id.clone())];
        if !self.domain.is_empty() {
            let mut d = vec![SExpr::atom("domain")];
            d.extend(self.domain.iter().map(|r| {
                SExpr::list(vec![Expr::Var(r.edge).to_sexpr(), r.lo.to_sexpr(), r.hi.to_sexpr()])
            }));
            v.push(SExpr::list(d));
        }
        if !self.require.is_empty() {
            let mut d = vec![SExpr::atom("require")];
            d.extend(self.require.iter().map(Comparison::to_sexpr));
            v.push(SExpr::list(d));
        }
        v.push(SExpr::list(vec![SExpr::atom("assert"), self.assert.to_sexpr()]));
        v.push(SExpr::list(vec![SExpr::atom("cite"), SExpr::string(self.cite.clone())]));
        SExpr::list(v)
    }
}

/// Reads every spec in a file.
pub fn parse_specs(text: &str) -> Result<Vec<IneqSpec>, ParseError> {
    sexpr::parse_all(text)?.iter().map(IneqSpec::parse).collect()
}

pub fn emit_specs(specs: &[IneqSpec]) -> String {
    let items: Vec<TopLevel> = specs.iter().map(|s| TopLevel::Form(s.to_sexpr())).collect();
    sexpr::emit_document(&items)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "(spec 1 (domain (y2 2 2.168) (y4 sqrt8 sqrt8)) (require (>= (eta y4 y5 y6) sqrt2)) (assert (< dih 1.93)) (cite \"c\"))\n(spec 2 (assert (< (+ (* 2 (arc 2 2 2t0)) (arc 2 2 2.387)) (* 2 pi))) (cite \"\"))\n";

    #[test]
    fn roundtrip() {
        let specs = parse_specs(TEXT).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(emit_specs(&specs), TEXT);
        let b = specs[0].domain_box();
        assert!(b[3].contains(8f64.sqrt()) && b[3].width() < 1e-15);
        assert!(b[0].contains(2.51) && b[0].contains(2.0));
        assert_eq!(specs[0].used_edges(), [true; 6]);
        assert_eq!(specs[1].used_edges(), [false; 6]);
    }

    #[test]
    fn errors_are_located() {
        for (text, line) in [
            ("(spec 1\n (assert (< dah 1)))", 2),
            ("(spec 1 (assert (< dih 1)))\n(spec 2 (domain (y7 2 3)) (assert (< dih 1)))", 2),
            ("(spec 1 (domain (y1 3 2)) (assert (< dih 1)))", 1),
            ("(spec 1 (domain (y1 y2 3)) (assert (< dih 1)))", 1),
            ("(spec 1 (cite \"no assert\"))", 1),
        ] {
            let e = parse_specs(text).unwrap_err();
            assert_eq!(e.pos.line, line, "{text}: {}", e.msg);
        }
    }

    #[test]
    fn point_and_interval_agree() {
        let spec = &parse_specs(TEXT).unwrap()[0];
        let y = [2.1, 2.05, 2.1, 2.5, 2.2, 2.3];
        let p: f64 = spec.assert.lhs.eval(&y);
        let i: Interval = spec.assert.lhs.eval(&y.map(Interval::point));
        assert!(i.contains(p) && i.width() < 1e-12);
    }
}
