use std::collections::HashMap;

use num_rational::BigRational;
use thiserror::Error;

use super::simplex::{self, Rel, Scalar, SimplexResult, Status, StdForm};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LpError {
    #[error("row `{row}` references undeclared variable index {var}")]
    UndeclaredVariable { row: String, var: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{name}` has empty bounds [{lo}, {hi}]")]
    EmptyBounds { name: String, lo: f64, hi: f64 },
    #[error("exact recheck disagrees: float {float} vs exact {exact}")]
    NumericalInstability { float: f64, exact: f64 },
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("LP text line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inequality db {line}:{col}: {msg}")]
    DbSyntax { line: usize, col: usize, msg: String },
    #[error("db row `{id}`: {msg}")]
    DbContext { id: String, msg: String },
    #[error("invalid refinement: {0}")]
    Refinement(String),
    #[error("branch rule: {0}")]
    Branch(String),
    #[error("strategy line {line}: {msg}")]
    Strategy { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Var {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coefs: Vec<(usize, f64)>,
    pub rel: Rel,
    pub rhs: f64,
    /// `identity:<family>`, `bound:<family>`, `db:<id>`, `branch:<rule>:<case>`
    /// or `derived`.
    pub provenance: String,
}

/// maximize `objective . x` over rows and variable bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    pub name: String,
    pub vars: Vec<Var>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, f64)>,
    /// Free-form `key value` notes carried through export, such as the
    /// y lower bound policy.
    pub notes: Vec<(String, String)>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl Outcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            Outcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// Optimal value, `+inf` when unbounded, `-inf` when infeasible.
    pub fn bound(&self) -> f64 {
        match self {
            Outcome::Optimal { value, .. } => *value,
            Outcome::Unbounded => f64::INFINITY,
            Outcome::Infeasible => f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactCheck {
    pub outcome: Outcome,
    /// Exact optimum of the model with its `f64` coefficients read as
    /// binary rationals.
    pub exact: Option<BigRational>,
}

/// How a model variable maps onto non-negative solver columns.
#[derive(Debug, Clone, Copy)]
enum Col {
    /// x = lo + c
    Shift(usize, f64),
    /// x = hi - c
    Mirror(usize, f64),
    /// x = c1 - c2
    Split(usize, usize),
}

impl LpModel {
    pub fn new(name: impl Into<String>) -> LpModel {
        LpModel {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Declares a variable; redeclaring intersects the bounds.
    pub fn add_var(&mut self, name: &str, lower: f64, upper: f64) -> usize {
        if let Some(&i) = self.index.get(name) {
            let v = &mut self.vars[i];
            v.lower = v.lower.max(lower);
            v.upper = v.upper.min(upper);
            return i;
        }
        let i = self.vars.len();
        self.vars.push(Var {
            name: name.to_string(),
            lower,
            upper,
        });
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn var_or_err(&self, name: &str) -> Result<usize, LpError> {
        self.var(name)
            .ok_or_else(|| LpError::UnknownVariable(name.to_string()))
    }

    pub fn add_row(
        &mut self,
        coefs: Vec<(usize, f64)>,
        rel: Rel,
        rhs: f64,
        provenance: impl Into<String>,
    ) -> usize {
        let i = self.rows.len();
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coefs.len());
        let mut sorted = coefs;
        sorted.sort_by_key(|c| c.0);
        for (j, a) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|c| c.1 != 0.0);
        self.rows.push(Row {
            name: format!("r{i}"),
            coefs: merged,
            rel,
            rhs,
            provenance: provenance.into(),
        });
        i
    }

    /// Adds a row given by variable names.
    pub fn add_named_row(
        &mut self,
        coefs: &[(&str, f64)],
        rel: Rel,
        rhs: f64,
        provenance: impl Into<String>,
    ) -> Result<usize, LpError> {
        let c = coefs
            .iter()
            .map(|(n, a)| self.var_or_err(n).map(|i| (i, *a)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.add_row(c, rel, rhs, provenance))
    }

    pub fn set_objective(&mut self, coefs: Vec<(usize, f64)>) {
        self.objective = coefs;
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set_note(&mut self, key: &str, value: &str) {
        self.notes.retain(|(k, _)| k != key);
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn validate(&self) -> Result<(), LpError> {
        for r in &self.rows {
            for &(j, _) in &r.coefs {
                if j >= self.vars.len() {
                    return Err(LpError::UndeclaredVariable {
                        row: r.name.clone(),
                        var: j,
                    });
                }
            }
        }
        for v in &self.vars {
            if v.lower > v.upper {
                return Err(LpError::EmptyBounds {
                    name: v.name.clone(),
                    lo: v.lower,
                    hi: v.upper,
                });
            }
        }
        Ok(())
    }

    fn columns(&self) -> (Vec<Col>, usize) {
        let mut cols = Vec::with_capacity(self.vars.len());
        let mut k = 0;
        for v in &self.vars {
            if v.lower.is_finite() {
                cols.push(Col::Shift(k, v.lower));
                k += 1;
            } else if v.upper.is_finite() {
                cols.push(Col::Mirror(k, v.upper));
                k += 1;
            } else {
                cols.push(Col::Split(k, k + 1));
                k += 2;
            }
        }
        (cols, k)
    }

    fn std_form<T: Scalar>(&self, cols: &[Col], ncols: usize) -> StdForm<T> {
        let mut a = Vec::new();
        let mut rel = Vec::new();
        let mut b = Vec::new();
        let emit = |coefs: &[(usize, f64)], r: Rel, rhs: f64, a: &mut Vec<Vec<T>>, rel: &mut Vec<Rel>, b: &mut Vec<T>| {
            let mut row = vec![T::zero(); ncols];
            let mut rhs_t = T::from_f64(rhs);
            for &(j, c) in coefs {
                let ct = T::from_f64(c);
                match cols[j] {
                    Col::Shift(k, lo) => {
                        row[k] = row[k].add(&ct);
                        rhs_t = rhs_t.sub(&ct.mul(&T::from_f64(lo)));
                    }
                    Col::Mirror(k, hi) => {
                        row[k] = row[k].sub(&ct);
                        rhs_t = rhs_t.sub(&ct.mul(&T::from_f64(hi)));
                    }
                    Col::Split(p, q) => {
                        row[p] = row[p].add(&ct);
                        row[q] = row[q].sub(&ct);
                    }
                }
            }
            a.push(row);
            rel.push(r);
            b.push(rhs_t);
        };
        for r in &self.rows {
            emit(&r.coefs, r.rel, r.rhs, &mut a, &mut rel, &mut b);
        }
        for (j, v) in self.vars.iter().enumerate() {
            if v.lower.is_finite() && v.upper.is_finite() {
                emit(&[(j, 1.0)], Rel::Le, v.upper, &mut a, &mut rel, &mut b);
            }
        }
        let mut c = vec![T::zero(); ncols];
        for &(j, w) in &self.objective {
            let wt = T::from_f64(w);
            match cols[j] {
                Col::Shift(k, _) => c[k] = c[k].add(&wt),
                Col::Mirror(k, _) => c[k] = c[k].sub(&wt),
                Col::Split(p, q) => {
                    c[p] = c[p].add(&wt);
                    c[q] = c[q].sub(&wt);
                }
            }
        }
        StdForm { a, rel, b, c }
    }

    fn objective_offset(&self, cols: &[Col]) -> f64 {
        self.objective
            .iter()
            .map(|&(j, w)| match cols[j] {
                Col::Shift(_, lo) => w * lo,
                Col::Mirror(_, hi) => w * hi,
                Col::Split(..) => 0.0,
            })
            .sum()
    }

    fn recover<T: Scalar>(&self, cols: &[Col], r: &SimplexResult<T>) -> Vec<f64> {
        cols.iter()
            .map(|c| match *c {
                Col::Shift(k, lo) => lo + r.x[k].to_f64(),
                Col::Mirror(k, hi) => hi - r.x[k].to_f64(),
                Col::Split(p, q) => r.x[p].to_f64() - r.x[q].to_f64(),
            })
            .collect()
    }

    fn solve_raw(&self) -> Result<(Vec<Col>, usize, SimplexResult<f64>), LpError> {
        self.validate()?;
        let (cols, n) = self.columns();
        let p = self.std_form::<f64>(&cols, n);
        let r = simplex::solve(&p);
        Ok((cols, n, r))
    }

    pub fn solve(&self) -> Result<Outcome, LpError> {
        let (cols, _, r) = self.solve_raw()?;
        self.outcome(&cols, &r)
    }

    fn outcome(&self, cols: &[Col], r: &SimplexResult<f64>) -> Result<Outcome, LpError> {
        Ok(match r.status {
            Status::Optimal => Outcome::Optimal {
                value: r.objective + self.objective_offset(cols),
                x: self.recover(cols, r),
            },
            Status::Infeasible => Outcome::Infeasible,
            Status::Unbounded => Outcome::Unbounded,
            Status::IterationLimit => return Err(LpError::IterationLimit),
        })
    }

    /// Solves in `f64`, then re-solves exactly from the final basis. Errors
    /// when the two disagree beyond `1e-7` relative.
    pub fn solve_checked(&self) -> Result<ExactCheck, LpError> {
        let (cols, n, r) = self.solve_raw()?;
        let outcome = self.outcome(&cols, &r)?;
        let q = self.std_form::<BigRational>(&cols, n);
        let e = simplex::solve_from_basis(&q, &r.basis);
        let exact = match (&outcome, &e.status) {
            (Outcome::Optimal { value, .. }, Status::Optimal) => {
                let mut off = <BigRational as Scalar>::zero();
                for &(j, w) in &self.objective {
                    let wt = <BigRational as Scalar>::from_f64(w);
                    match cols[j] {
                        Col::Shift(_, lo) => off = off.add(&wt.mul(&Scalar::from_f64(lo))),
                        Col::Mirror(_, hi) => off = off.add(&wt.mul(&Scalar::from_f64(hi))),
                        Col::Split(..) => {}
                    }
                }
                let ex = Scalar::add(&e.objective, &off);
                let exf = Scalar::to_f64(&ex);
                if (exf - value).abs() > 1e-7 * (1.0 + value.abs()) {
                    return Err(LpError::NumericalInstability {
                        float: *value,
                        exact: exf,
                    });
                }
                Some(ex)
            }
            (Outcome::Infeasible, Status::Infeasible) | (Outcome::Unbounded, Status::Unbounded) => None,
            (o, _) => {
                return Err(LpError::NumericalInstability {
                    float: o.bound(),
                    exact: match e.status {
                        Status::Infeasible => f64::NEG_INFINITY,
                        Status::Unbounded => f64::INFINITY,
                        _ => f64::NAN,
                    },
                })
            }
        };
        Ok(ExactCheck { outcome, exact })
    }

    /// Maximizes `target . x` over the model's rows; the row `target . x <=
    /// bound` is proven when that maximum does not exceed `bound + 1e-9`.
    pub fn derive_inequality(&self, target: &[(usize, f64)], bound: f64) -> Result<Derived, LpError> {
        let mut m = self.clone();
        m.objective = target.to_vec();
        let max = m.solve()?.bound();
        Ok(if max <= bound + 1e-9 {
            Derived::Proven { max }
        } else {
            Derived::Unproven { max }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derived {
    Proven { max: f64 },
    Unproven { max: f64 },
}

impl Derived {
    pub fn is_proven(&self) -> bool {
        matches!(self, Derived::Proven { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_max() {
        let mut m = LpModel::new("t");
        let x1 = m.add_var("x1", 0.0, f64::INFINITY);
        let x2 = m.add_var("x2", 0.0, f64::INFINITY);
        m.add_row(vec![(x1, 1.0)], Rel::Le, 1.0, "derived");
        m.add_row(vec![(x2, 1.0)], Rel::Le, 2.0, "derived");
        m.set_objective(vec![(x1, 1.0), (x2, 1.0)]);
        assert_eq!(m.solve().unwrap().value(), Some(3.0));
        let c = m.solve_checked().unwrap();
        assert_eq!(Scalar::to_f64(c.exact.as_ref().unwrap()), 3.0);
    }

    #[test]
    fn trivial_infeasible() {
        let mut m = LpModel::new("t");
        let x = m.add_var("x", 0.0, f64::INFINITY);
        m.add_row(vec![(x, 1.0)], Rel::Le, 1.0, "derived");
        m.add_row(vec![(x, 1.0)], Rel::Ge, 2.0, "derived");
        m.set_objective(vec![(x, 1.0)]);
        assert_eq!(m.solve().unwrap(), Outcome::Infeasible);
    }

    #[test]
    fn free_and_mirrored_variables() {
        // max -|x - 3| style: max t s.t. t <= x - 3, t <= 3 - x, x free, t <= 10
        let mut m = LpModel::new("t");
        let x = m.add_var("x", f64::NEG_INFINITY, f64::INFINITY);
        let t = m.add_var("t", f64::NEG_INFINITY, 10.0);
        m.add_row(vec![(t, 1.0), (x, -1.0)], Rel::Le, -3.0, "derived");
        m.add_row(vec![(t, 1.0), (x, 1.0)], Rel::Le, 3.0, "derived");
        m.set_objective(vec![(t, 1.0)]);
        match m.solve().unwrap() {
            Outcome::Optimal { value, x: sol } => {
                assert!(value.abs() < 1e-12);
                assert!((sol[x] - 3.0).abs() < 1e-12);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn derive_fixtures() {
        let mut m = LpModel::new("t");
        let x = m.add_var("x", f64::NEG_INFINITY, f64::INFINITY);
        m.add_row(vec![(x, 1.0)], Rel::Le, 1.0, "derived");
        assert_eq!(m.derive_inequality(&[(x, 1.0)], 2.0).unwrap(), Derived::Proven { max: 1.0 });
        assert_eq!(
            m.derive_inequality(&[(x, 1.0)], 0.5).unwrap(),
            Derived::Unproven { max: 1.0 }
        );
        assert_eq!(
            m.derive_inequality(&[(x, -1.0)], 0.5).unwrap(),
            Derived::Unproven { max: f64::INFINITY }
        );
    }

    #[test]
    fn duplicate_terms_merge() {
        let mut m = LpModel::new("t");
        let x = m.add_var("x", 0.0, 5.0);
        m.add_row(vec![(x, 1.0), (x, 1.0)], Rel::Le, 4.0, "derived");
        assert_eq!(m.rows[0].coefs, vec![(x, 2.0)]);
        m.set_objective(vec![(x, 1.0)]);
        assert_eq!(m.solve().unwrap().value(), Some(2.0));
    }
}
