//! Box subdivision prover for inequality specs.

use std::fmt;

use crate::par::Exec;

use super::grad::Grad;
use super::interval::Interval;
use super::simplex::{arc, delta4, delta6, ups, Real};
use super::spec::{Cmp, Comparison, Expr, IneqSpec, Prim};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Proven,
    /// A realizable point inside the domain where the assertion fails.
    Failed { witness: [f64; 6] },
    /// Budget spent, or a box too small to split that neither proves nor
    /// refutes.
    Unknown,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Proven => "proven",
            Status::Failed { .. } => "failed",
            Status::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyResult {
    pub status: Status,
    /// Boxes evaluated.
    pub cells: usize,
    /// Smallest margin over the proven boxes, in the units of the function
    /// bounded; `+inf` when none.
    pub slack: f64,
}

type Cell = [Interval; 6];

enum Verdict {
    Discard,
    Proven(f64),
    Failed([f64; 6]),
    Split(Cell, Cell),
    Stuck,
}

/// A function of the six edges, evaluable at points, boxes and gradients.
trait Func: Sync {
    fn at<T: Real>(&self, y: &[T; 6]) -> T;
}

impl Func for Comparison {
    fn at<T: Real>(&self, y: &[T; 6]) -> T {
        self.difference(y)
    }
}

/// Volume and the four face areas, each squared and scaled, then the face
/// angle triangle inequalities at each vertex.
struct Realizability(usize);

/// Edges at each vertex, listed as (near, near, opposite) for each face angle.
const CORNERS: [[[usize; 3]; 3]; 4] = [
    [[0, 1, 5], [0, 2, 4], [1, 2, 3]],
    [[0, 5, 1], [0, 4, 2], [5, 4, 3]],
    [[1, 5, 0], [1, 3, 2], [5, 3, 4]],
    [[2, 4, 0], [2, 3, 1], [4, 3, 5]],
];

const CHECKS: usize = 5 + 12;

impl Func for Realizability {
    fn at<T: Real>(&self, y: &[T; 6]) -> T {
        let [x1, x2, x3, x4, x5, x6] = y.map(|v| v.sq());
        match self.0 {
            0 => ups(x1, x2, x6),
            1 => ups(x1, x3, x5),
            2 => ups(x2, x3, x4),
            3 => ups(x4, x5, x6),
            4 => delta6([x1, x2, x3, x4, x5, x6]),
            k => {
                let corner = CORNERS[(k - 5) / 3];
                let a = corner.map(|[p, q, r]| arc(y[p], y[q], y[r]));
                let big = (k - 5) % 3;
                let mut gap = -a[big];
                for (i, v) in a.iter().enumerate() {
                    if i != big {
                        gap = gap + *v;
                    }
                }
                gap
            }
        }
    }
}

/// An upper (`upper = true`) or lower bound of `f` over the box, tightened
/// by pushing monotone coordinates to their extreme endpoint and by the
/// mean value form.
fn bound<F: Func>(f: &F, cell: &Cell, upper: bool) -> f64 {
    let pick = |v: Interval| if upper { v.hi } else { v.lo };
    let better = |a: f64, b: f64| if upper { a.min(b) } else { a.max(b) };
    let mut c = *cell;
    let mut best = pick(f.at(&c));
    for _ in 0..4 {
        let g: Grad = f.at(&Grad::vars(&c));
        best = better(best, pick(g.v));
        let m = c.map(|v| Interval::point(v.mid()));
        let mut mv = f.at(&m);
        for i in 0..6 {
            if c[i].width() > 0.0 {
                mv = mv + g.d[i] * (c[i] - m[i]);
            }
        }
        best = better(best, pick(mv));
        let mut moved = false;
        for i in 0..6 {
            if c[i].width() == 0.0 {
                continue;
            }
            let inc = g.d[i].lo >= 0.0;
            let dec = g.d[i].hi <= 0.0;
            if inc || dec {
                let end = if inc == upper { c[i].hi } else { c[i].lo };
                c[i] = Interval::point(end);
                moved = true;
            }
        }
        if !moved {
            break;
        }
        best = better(best, pick(f.at(&c)));
    }
    best
}

/// Definitely not a simplex: some face or the volume is negative throughout.
fn unrealizable(c: &Cell) -> bool {
    (0..CHECKS).any(|k| bound(&Realizability(k), c, true) < 0.0)
}

/// Strictly a non-degenerate simplex at a point.
fn realizable_point(y: &[f64; 6]) -> bool {
    let x = y.map(|v| Interval::point(v).sq());
    let [x1, x2, x3, x4, x5, x6] = x;
    let pos = |v: Interval| v.lo > 0.0;
    pos(ups(x1, x2, x6)) && pos(ups(x1, x3, x5)) && pos(ups(x2, x3, x4)) && pos(ups(x4, x5, x6)) && pos(delta6(x))
}

/// `dih <op> c` rewritten as `delta4 - k sqrt(ups ups) <op'> 0` with
/// `k = cos c`. Smooth up to the flat simplices, where acos is not.
struct CosForm {
    args: [Expr; 6],
    k: f64,
    cmp: Cmp,
}

impl CosForm {
    fn new(a: &Comparison) -> Option<CosForm> {
        let Expr::Prim(p, args) = &a.lhs else { return None };
        let mut rv = [false; 6];
        a.rhs.vars(&mut rv);
        if rv.iter().any(|&u| u) {
            return None;
        }
        let c: Interval = a.rhs.eval(&[Interval::point(0.0); 6]);
        if !(c.lo >= 0.0 && c.hi <= 3.0) {
            return None;
        }
        let [y1, y2, y3, y4, y5, y6] = <[Expr; 6]>::try_from(args.clone()).ok()?;
        let args = match p {
            Prim::Dih => [y1, y2, y3, y4, y5, y6],
            Prim::Dih2 => [y2, y1, y3, y5, y4, y6],
            Prim::Dih3 => [y3, y1, y2, y6, y4, y5],
            _ => return None,
        };
        // cos is decreasing here; step past libm error
        let (k, cmp) = match a.cmp {
            // need cos dih > k for every k in cos(c); the largest is the hardest
            Cmp::Lt => (c.lo.cos() + 4.0 * f64::EPSILON, Cmp::Gt),
            Cmp::Le => (c.lo.cos() + 4.0 * f64::EPSILON, Cmp::Ge),
            Cmp::Gt => (c.hi.cos() - 4.0 * f64::EPSILON, Cmp::Lt),
            Cmp::Ge => (c.hi.cos() - 4.0 * f64::EPSILON, Cmp::Le),
        };
        Some(CosForm { args, k, cmp })
    }
}

impl Func for CosForm {
    fn at<T: Real>(&self, y: &[T; 6]) -> T {
        let x = self.args.each_ref().map(|e| e.eval(y).sq());
        let [x1, x2, x3, _, x5, x6] = x;
        delta4(x) - T::c(self.k) * (ups(x1, x2, x6) * ups(x1, x3, x5)).sqrt()
    }
}

/// The half of the enclosure of `f` that decides whether `cmp` holds.
fn holds_side<F: Func>(f: &F, cmp: Cmp, c: &Cell) -> Interval {
    match cmp {
        Cmp::Lt | Cmp::Le => Interval::new(f64::NEG_INFINITY, bound(f, c, true)),
        Cmp::Gt | Cmp::Ge => Interval::new(bound(f, c, false), f64::INFINITY),
    }
}

/// The half that decides whether `cmp` fails.
fn fails_side<F: Func>(f: &F, cmp: Cmp, c: &Cell) -> Interval {
    match cmp {
        Cmp::Lt | Cmp::Le => Interval::new(bound(f, c, false), f64::INFINITY),
        Cmp::Gt | Cmp::Ge => Interval::new(f64::NEG_INFINITY, bound(f, c, true)),
    }
}

struct Ctx<'a> {
    spec: &'a IneqSpec,
    simplex: bool,
    /// Coordinates worth splitting: used, and not a point up to rounding.
    split: [bool; 6],
    scale: [f64; 6],
    cos: Option<CosForm>,
}

impl Ctx<'_> {
    fn judge(&self, c: &Cell) -> Verdict {
        if self.simplex && unrealizable(c) {
            return Verdict::Discard;
        }
        if self.spec.require.iter().any(|r| r.cmp.fails(fails_side(r, r.cmp, c))) {
            return Verdict::Discard;
        }
        let (cmp, d) = match &self.cos {
            Some(f) => (f.cmp, holds_side(f, f.cmp, c)),
            None => (self.spec.assert.cmp, holds_side(&self.spec.assert, self.spec.assert.cmp, c)),
        };
        if cmp.holds(d) {
            return Verdict::Proven(cmp.slack(d));
        }
        let mid = c.map(|v| v.mid());
        if self.point_fails(&mid) {
            return Verdict::Failed(mid);
        }
        let pick = (0..6)
            .filter(|&i| self.split[i] && c[i].width() > 0.0)
            .max_by(|&i, &j| (c[i].width() / self.scale[i]).total_cmp(&(c[j].width() / self.scale[j])).then(j.cmp(&i)));
        match pick {
            Some(i) if c[i].width() / self.scale[i] > 1e-12 => {
                let (a, b) = c[i].split();
                let (mut l, mut r) = (*c, *c);
                l[i] = a;
                r[i] = b;
                Verdict::Split(l, r)
            }
            _ => Verdict::Stuck,
        }
    }

    /// The assertion fails, in interval arithmetic, at a realizable point
    /// where every requirement holds.
    fn point_fails(&self, y: &[f64; 6]) -> bool {
        if self.simplex && !realizable_point(y) {
            return false;
        }
        let p = y.map(Interval::point);
        self.spec.require.iter().all(|r| r.cmp.holds(r.difference(&p))) && self.spec.assert.cmp.fails(self.spec.assert.difference(&p))
    }
}

/// Breadth-first subdivision. Each round judges the whole frontier, so the
/// cell count and result do not depend on the execution mode.
pub fn verify(spec: &IneqSpec, budget: usize, exec: Exec) -> VerifyResult {
    let root = spec.domain_box();
    let used = spec.used_edges();
    let ctx = Ctx {
        spec,
        simplex: used.iter().any(|&u| u),
        split: std::array::from_fn(|i| used[i] && root[i].width() > 1e-9),
        scale: root.map(|v| if v.width() > 0.0 { v.width() } else { 1.0 }),
        cos: CosForm::new(&spec.assert),
    };
    let mut frontier = vec![root];
    let mut cells = 0usize;
    let mut slack = f64::INFINITY;
    let mut stuck = false;
    while !frontier.is_empty() {
        let room = budget - cells;
        let over = frontier.len() > room;
        frontier.truncate(room);
        cells += frontier.len();
        let verdicts = exec.map(&frontier, |c| ctx.judge(c));
        let mut next = Vec::new();
        for v in verdicts {
            match v {
                Verdict::Discard => {}
                Verdict::Proven(s) => slack = slack.min(s),
                Verdict::Failed(w) => {
                    return VerifyResult {
                        status: Status::Failed { witness: w },
                        cells,
                        slack,
                    }
                }
                Verdict::Split(a, b) => {
                    next.push(a);
                    next.push(b);
                }
                Verdict::Stuck => stuck = true,
            }
        }
        if over {
            return VerifyResult {
                status: Status::Unknown,
                cells,
                slack,
            };
        }
        frontier = next;
    }
    VerifyResult {
        status: if stuck { Status::Unknown } else { Status::Proven },
        cells,
        slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::spec::parse_specs;

    fn one(text: &str) -> IneqSpec {
        parse_specs(text).unwrap().remove(0)
    }

    #[test]
    fn constant_fact_in_one_cell() {
        let s = one("(spec p (assert (< (+ (* 2 (arc 2 2 2t0)) (* 2 (arc 2 2 2)) (arc 2 2 2.387)) (* 2 pi))))");
        let r = verify(&s, 10, Exec::Sequential);
        assert_eq!(r.status, Status::Proven);
        assert_eq!(r.cells, 1);
        assert!(r.slack > 0.0);
    }

    #[test]
    fn false_constant_fact_fails() {
        let s = one("(spec p (assert (> (arc 2 2 2) 1.1)))");
        assert!(matches!(verify(&s, 10, Exec::Sequential).status, Status::Failed { .. }));
    }

    #[test]
    fn regular_dih_bounds() {
        let s = one("(spec d (assert (> dih 0.7)))");
        let r = verify(&s, 100_000, Exec::Sequential);
        assert_eq!(r.status, Status::Proven, "{r:?}");
        let s = one("(spec d (assert (> dih 0.9)))");
        let r = verify(&s, 100_000, Exec::Sequential);
        let Status::Failed { witness } = r.status else { panic!("{r:?}") };
        assert!(crate::geometry::simplex::dih(witness) <= 0.9);
        let s = one("(spec d (assert (< dih 1.2)))");
        let r = verify(&s, 100_000, Exec::Sequential);
        let Status::Failed { witness } = r.status else { panic!("{r:?}") };
        assert!(crate::geometry::simplex::dih(witness) >= 1.2);
    }

    #[test]
    fn pinned_edges_are_not_split() {
        let s = one("(spec d (domain (y4 sqrt8 sqrt8) (y5 2t0 2t0) (y6 2t0 4.678)) (assert (< dih 1.77)))");
        let r = verify(&s, 100_000, Exec::Sequential);
        assert_eq!(r.status, Status::Proven, "{r:?}");
    }

    #[test]
    fn budget_reported() {
        let s = one("(spec d (assert (> dih 1.0)))");
        let r = verify(&s, 3, Exec::Sequential);
        assert_eq!((r.status, r.cells), (Status::Unknown, 3));
    }

    #[test]
    fn modes_agree() {
        let s = one("(spec d (domain (y4 2t0 sqrt8)) (assert (< dih 2.28)))");
        let a = verify(&s, 200_000, Exec::Sequential);
        let b = verify(&s, 200_000, Exec::Parallel);
        assert_eq!(a, b);
    }
}
