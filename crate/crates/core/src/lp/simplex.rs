//! Dense two-phase tableau simplex, generic over the scalar type so the same
//! code runs in `f64` and in exact rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Sign, treating values within the pivot tolerance as zero.
    fn sign(&self) -> i8;
    /// Sign with no tolerance.
    fn exact_sign(&self) -> i8;
    fn is_exact_zero(&self) -> bool {
        self.exact_sign() == 0
    }
    fn lt(&self, o: &Self) -> bool {
        o.sub(self).sign() > 0
    }
}

pub const F64_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> i8 {
        if *self > F64_TOL {
            1
        } else if *self < -F64_TOL {
            -1
        } else {
            0
        }
    }
    fn exact_sign(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_f64(x: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(x).expect("finite coefficient")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn exact_sign(&self) -> i8 {
        self.sign()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

impl Rel {
    pub fn symbol(&self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }

    fn flip(self) -> Rel {
        match self {
            Rel::Le => Rel::Ge,
            Rel::Ge => Rel::Le,
            Rel::Eq => Rel::Eq,
        }
    }
}

/// maximize `c.x` subject to `a_i.x rel_i b_i`, `x >= 0`.
#[derive(Debug, Clone)]
pub struct StdForm<T> {
    pub a: Vec<Vec<T>>,
    pub rel: Vec<Rel>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SimplexResult<T> {
    pub status: Status,
    pub x: Vec<T>,
    pub objective: T,
    /// Basic column of every tableau row at termination.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

/// Row/column layout shared between the float and exact solves so a basis
/// found by one can seed the other.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    n_struct: usize,
    art_start: usize,
    ncols: usize,
    d: Vec<T>,
    z: T,
    pivots: usize,
}

const DEGENERATE_SWITCH: usize = 64;
const MAX_PIVOTS: usize = 200_000;

impl<T: Scalar> Tableau<T> {
    fn new(p: &StdForm<T>) -> Tableau<T> {
        let m = p.a.len();
        let n = p.c.len();
        let mut rel = p.rel.clone();
        let mut a = p.a.clone();
        let mut b = p.b.clone();
        for i in 0..m {
            if b[i].exact_sign() < 0 {
                b[i] = b[i].neg();
                for x in a[i].iter_mut() {
                    *x = x.neg();
                }
                rel[i] = rel[i].flip();
            }
        }
        let n_slack = rel.iter().filter(|r| **r != Rel::Eq).count();
        let n_art = rel.iter().filter(|r| **r != Rel::Le).count();
        let art_start = n + n_slack;
        let ncols = art_start + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut t) = (n, art_start);
        for i in 0..m {
            let mut row = a[i].clone();
            row.resize(ncols, T::zero());
            match rel[i] {
                Rel::Le => {
                    row[s] = T::one();
                    basis.push(s);
                    s += 1;
                }
                Rel::Ge => {
                    row[s] = T::one().neg();
                    s += 1;
                    row[t] = T::one();
                    basis.push(t);
                    t += 1;
                }
                Rel::Eq => {
                    row[t] = T::one();
                    basis.push(t);
                    t += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            rhs: b,
            basis,
            n_struct: n,
            art_start,
            ncols,
            d: vec![T::zero(); ncols],
            z: T::zero(),
            pivots: 0,
        }
    }

    fn set_costs(&mut self, cost: &[T]) {
        let m = self.rows.len();
        let mut d = cost.to_vec();
        let mut z = T::zero();
        for i in 0..m {
            let cb = &cost[self.basis[i]];
            if cb.is_exact_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !self.rows[i][j].is_exact_zero() {
                    d[j] = d[j].sub(&cb.mul(&self.rows[i][j]));
                }
            }
            z = z.add(&cb.mul(&self.rhs[i]));
        }
        for i in 0..m {
            d[self.basis[i]] = T::zero();
        }
        self.d = d;
        self.z = z;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q].clone();
        let inv = T::one().div(&piv);
        for x in self.rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        self.rhs[r] = self.rhs[r].mul(&inv);
        self.rows[r][q] = T::one();
        let pr = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..self.ncols)
            .filter(|&j| !pr[j].is_exact_zero())
            .collect();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][q].clone();
            if f.is_exact_zero() {
                continue;
            }
            for &j in &nz {
                self.rows[i][j] = self.rows[i][j].sub(&f.mul(&pr[j]));
            }
            self.rows[i][q] = T::zero();
            self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs));
        }
        let f = self.d[q].clone();
        if !f.is_exact_zero() {
            for &j in &nz {
                self.d[j] = self.d[j].sub(&f.mul(&pr[j]));
            }
            self.d[q] = T::zero();
            self.z = self.z.add(&f.mul(&prhs));
        }
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Maximizes the current cost row over columns `< limit`.
    fn optimize(&mut self, limit: usize) -> Status {
        let mut degenerate = 0usize;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Status::IterationLimit;
            }
            let bland = degenerate >= DEGENERATE_SWITCH;
            let mut q = None;
            for j in 0..limit {
                if self.d[j].sign() > 0 {
                    match q {
                        None => q = Some(j),
                        Some(k) if !bland && self.d[k].lt(&self.d[j]) => q = Some(j),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some(q) = q else {
                return Status::Optimal;
            };
            let mut r: Option<usize> = None;
            let mut best = T::zero();
            for i in 0..self.rows.len() {
                if self.rows[i][q].sign() > 0 {
                    let ratio = self.rhs[i].div(&self.rows[i][q]);
                    let take = match r {
                        None => true,
                        Some(k) => {
                            ratio.lt(&best)
                                || (!best.lt(&ratio) && self.basis[i] < self.basis[k])
                        }
                    };
                    if take {
                        r = Some(i);
                        best = ratio;
                    }
                }
            }
            let Some(r) = r else {
                return Status::Unbounded;
            };
            if best.sign() == 0 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
    }

    fn phase_one(&mut self) -> Status {
        let mut cost = vec![T::zero(); self.ncols];
        for c in cost.iter_mut().skip(self.art_start) {
            *c = T::one().neg();
        }
        self.set_costs(&cost);
        let st = self.optimize(self.ncols);
        if st != Status::Optimal {
            return st;
        }
        if self.z.sign() < 0 {
            return Status::Infeasible;
        }
        self.drive_out_artificials();
        Status::Optimal
    }

    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if self.basis[i] >= self.art_start {
                if let Some(j) = (0..self.art_start).find(|&j| self.rows[i][j].sign() != 0) {
                    self.pivot(i, j);
                }
            }
        }
    }

    fn phase_two(&mut self, c: &[T]) -> Status {
        let mut cost = c.to_vec();
        cost.resize(self.ncols, T::zero());
        self.set_costs(&cost);
        self.optimize(self.art_start)
    }

    fn primal(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    fn result(&self, status: Status) -> SimplexResult<T> {
        SimplexResult {
            status,
            x: self.primal(),
            objective: self.z.clone(),
            basis: self.basis.clone(),
            pivots: self.pivots,
        }
    }

    /// Pivots the columns of `target` into the basis. Returns false when the
    /// requested basis is singular.
    fn force_basis(&mut self, target: &[usize]) -> bool {
        for &col in target {
            if self.basis.contains(&col) {
                continue;
            }
            let r = (0..self.rows.len()).find(|&i| {
                !target.contains(&self.basis[i]) && self.rows[i][col].sign() != 0
            });
            match r {
                Some(r) => self.pivot(r, col),
                None => return false,
            }
        }
        true
    }
}

pub fn solve<T: Scalar>(p: &StdForm<T>) -> SimplexResult<T> {
    let mut t = Tableau::new(p);
    let st = t.phase_one();
    if st != Status::Optimal {
        return t.result(st);
    }
    let st = t.phase_two(&p.c);
    t.result(st)
}

/// Solves starting from a basis reported by another solve of the same
/// problem. Falls back to a cold start when that basis is singular or not
/// primal feasible.
pub fn solve_from_basis<T: Scalar>(p: &StdForm<T>, basis: &[usize]) -> SimplexResult<T> {
    let mut t = Tableau::new(p);
    let target: Vec<usize> = basis.iter().copied().filter(|&j| j < t.art_start).collect();
    if t.force_basis(&target) && t.rhs.iter().all(|x| x.sign() >= 0) {
        let feasible = t
            .basis
            .iter()
            .zip(&t.rhs)
            .all(|(&b, v)| b < t.art_start || v.sign() == 0);
        if feasible {
            t.drive_out_artificials();
            let st = t.phase_two(&p.c);
            return t.result(st);
        }
    }
    solve(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(a: Vec<Vec<f64>>, rel: Vec<Rel>, b: Vec<f64>, c: Vec<f64>) -> StdForm<f64> {
        StdForm { a, rel, b, c }
    }

    #[test]
    fn small_max() {
        let p = sf(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![Rel::Le, Rel::Le],
            vec![1.0, 2.0],
            vec![1.0, 1.0],
        );
        let r = solve(&p);
        assert_eq!(r.status, Status::Optimal);
        assert!((r.objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = sf(
            vec![vec![1.0], vec![1.0]],
            vec![Rel::Le, Rel::Ge],
            vec![1.0, 2.0],
            vec![1.0],
        );
        assert_eq!(solve(&p).status, Status::Infeasible);
        let p = sf(vec![vec![1.0, -1.0]], vec![Rel::Le], vec![1.0], vec![1.0, 0.0]);
        assert_eq!(solve(&p).status, Status::Unbounded);
    }

    #[test]
    fn negative_rhs_and_equality() {
        // max -x - y  s.t. x + y = 3, x - y <= -1  ->  (1,2), objective -3
        let p = sf(
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![Rel::Eq, Rel::Le],
            vec![3.0, -1.0],
            vec![-1.0, -1.0],
        );
        let r = solve(&p);
        assert_eq!(r.status, Status::Optimal);
        assert!((r.objective + 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_matches_float_via_warm_start() {
        let p = sf(
            vec![vec![3.0, 2.0, 1.0], vec![1.0, 4.0, 2.0], vec![1.0, 1.0, 1.0]],
            vec![Rel::Le, Rel::Le, Rel::Ge],
            vec![10.0, 12.0, 1.0],
            vec![2.0, 3.0, 1.0],
        );
        let f = solve(&p);
        let q: StdForm<BigRational> = StdForm {
            a: p.a.iter().map(|r| r.iter().map(|&x| Scalar::from_f64(x)).collect()).collect(),
            rel: p.rel.clone(),
            b: p.b.iter().map(|&x| Scalar::from_f64(x)).collect(),
            c: p.c.iter().map(|&x| Scalar::from_f64(x)).collect(),
        };
        let e = solve_from_basis(&q, &f.basis);
        assert_eq!(e.status, Status::Optimal);
        assert!((Scalar::to_f64(&e.objective) - f.objective).abs() < 1e-12);
        let cold = solve(&q);
        assert_eq!(cold.objective, e.objective);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example.
        let p = sf(
            vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![Rel::Le, Rel::Le, Rel::Le],
            vec![0.0, 0.0, 1.0],
            vec![0.75, -150.0, 0.02, -6.0],
        );
        let r = solve(&p);
        assert_eq!(r.status, Status::Optimal);
        assert!((r.objective - 0.05).abs() < 1e-9);
    }
}
