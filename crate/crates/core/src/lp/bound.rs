//! Bounding a graph: relaxation, then level-by-level branching until every
//! leaf falls below the target or the strategy runs out.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::constants::constants;
use crate::par::Exec;
use crate::planegraph::PlaneGraph;

use super::branch::{applied, branch, BranchRule};
use super::ineqdb::IneqDb;
use super::model::{LpError, LpModel, Outcome};
use super::relaxation::build_relaxation;
use super::simplex::Scalar;

pub const DEFAULT_DEPTH_CAP: usize = 12;
pub const DEFAULT_MAX_NODES: usize = 4096;
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum RuleSpec {
    /// The triangle rule on every triangle of the graph, one level each.
    AllTriangles,
    /// The quad rule on every quadrilateral.
    AllQuads,
    Rule(BranchRule),
}

/// An ordered rule list. Level `k` of the tree applies the `k`-th expanded
/// rule to every open leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    pub rules: Vec<RuleSpec>,
    pub depth_cap: usize,
    pub max_nodes: usize,
    pub exec: Exec,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            rules: Vec::new(),
            depth_cap: DEFAULT_DEPTH_CAP,
            max_nodes: DEFAULT_MAX_NODES,
            exec: Exec::default(),
        }
    }
}

impl Strategy {
    /// Reads a script: `depth-cap N`, `max-nodes N`, and `rule <kind> args..`
    /// lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Strategy, LpError> {
        let mut s = Strategy::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| LpError::Strategy { line, msg };
            let body = raw.split('#').next().unwrap_or("");
            let w: Vec<&str> = body.split_whitespace().collect();
            let Some((&head, args)) = w.split_first() else { continue };
            let num = |a: &[&str]| -> Result<usize, LpError> {
                match a {
                    [x] => x.parse().map_err(|_| err(format!("expected a count, got `{x}`"))),
                    _ => Err(err(format!("`{head}` takes one count"))),
                }
            };
            match head {
                "depth-cap" => s.depth_cap = num(args)?,
                "max-nodes" => s.max_nodes = num(args)?,
                "rule" => s.rules.push(parse_rule(args).map_err(err)?),
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        Ok(s)
    }

    pub fn emit(&self) -> String {
        let mut out = format!("depth-cap {}\nmax-nodes {}\n", self.depth_cap, self.max_nodes);
        for r in &self.rules {
            match r {
                RuleSpec::AllTriangles => out.push_str("rule triangle-ysum\n"),
                RuleSpec::AllQuads => out.push_str("rule quad-4case\n"),
                RuleSpec::Rule(r) => {
                    let _ = writeln!(out, "rule {r}");
                }
            }
        }
        out
    }

    /// The concrete rule per level for graph `g`.
    pub fn expand(&self, g: &PlaneGraph) -> Vec<BranchRule> {
        let mut out = Vec::new();
        for r in &self.rules {
            match r {
                RuleSpec::AllTriangles => {
                    out.extend((0..g.face_count()).filter(|&f| g.face(f).len() == 3).map(BranchRule::triangle))
                }
                RuleSpec::AllQuads => out.extend(
                    (0..g.face_count())
                        .filter(|&f| g.face(f).len() == 4)
                        .map(|face| BranchRule::Quad4Case { face }),
                ),
                RuleSpec::Rule(r) => out.push(r.clone()),
            }
        }
        out
    }
}

fn parse_rule(args: &[&str]) -> Result<RuleSpec, String> {
    let face = |a: &str| a.parse::<usize>().map_err(|_| format!("expected a face index, got `{a}`"));
    let Some((&kind, rest)) = args.split_first() else {
        return Err("`rule` needs a kind".into());
    };
    Ok(match (kind, rest) {
        ("triangle-ysum", []) => RuleSpec::AllTriangles,
        ("triangle-ysum", [f]) => RuleSpec::Rule(BranchRule::triangle(face(f)?)),
        ("quad-4case", []) => RuleSpec::AllQuads,
        ("quad-4case", [f]) => RuleSpec::Rule(BranchRule::Quad4Case { face: face(f)? }),
        ("upright-height", [d, anchors @ ..]) => RuleSpec::Rule(BranchRule::upright(d, anchors)),
        ("flat-quarter-3case", [d]) => RuleSpec::Rule(BranchRule::flat_quarter(d)),
        ("typeA-3case", [a, b]) => RuleSpec::Rule(BranchRule::type_a(a, b)),
        ("quad-diagonal", [d]) => RuleSpec::Rule(BranchRule::quad_diagonal(d)),
        (k, a) => return Err(format!("bad rule `{k}` with {} argument(s)", a.len())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    /// Bound below the target in both float and exact arithmetic.
    Eliminated,
    /// Split into children.
    Branched,
    /// Left open: no rule left, or the budget ran out.
    Open,
}

impl NodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::Eliminated => "eliminated",
            NodeStatus::Branched => "branched",
            NodeStatus::Open => "open",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub label: String,
    pub bound: f64,
    pub status: NodeStatus,
    /// Set when float and exact solves disagreed on this node.
    pub unstable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Eliminated,
    NotEliminated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Largest bound over the leaves.
    pub bound: f64,
    pub verdict: Verdict,
    pub tree: Vec<TreeNode>,
    pub budget_exhausted: bool,
}

impl BoundReport {
    /// One line per node: `id parent depth label bound status`.
    pub fn log(&self) -> String {
        let mut out = String::new();
        for n in &self.tree {
            let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
            let _ = write!(
                out,
                "{} {} {} {} {:.12} {}",
                n.id,
                parent,
                n.depth,
                n.label,
                n.bound,
                n.status.as_str()
            );
            if n.unstable {
                out.push_str(" unstable");
            }
            out.push('\n');
        }
        if self.budget_exhausted {
            out.push_str("budget exhausted\n");
        }
        out
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.tree.iter().filter(|n| n.status != NodeStatus::Branched)
    }
}

/// Float solve, confirmed in exact arithmetic when it claims elimination.
fn evaluate(m: &LpModel) -> Result<(f64, bool, bool), LpError> {
    let target = constants().eight_pt;
    let float = m.solve()?.bound();
    if !(float < target - EPS) {
        return Ok((float, false, false));
    }
    match m.solve_checked() {
        Ok(c) => {
            let exact_ok = match (&c.outcome, &c.exact) {
                (Outcome::Infeasible, _) => true,
                (Outcome::Optimal { .. }, Some(q)) => *q < <BigRational as Scalar>::from_f64(target),
                _ => false,
            };
            Ok((float, exact_ok, false))
        }
        Err(LpError::NumericalInstability { .. }) => Ok((float, false, true)),
        Err(e) => Err(e),
    }
}

pub fn bound_graph(g: &PlaneGraph, db: &IneqDb, strategy: &Strategy) -> Result<BoundReport, LpError> {
    let root = build_relaxation(g, db)?;
    bound_model(root, &strategy.expand(g), strategy)
}

/// Branch and bound from an already built model.
pub fn bound_model(root: LpModel, rules: &[BranchRule], strategy: &Strategy) -> Result<BoundReport, LpError> {
    let (b, elim, unstable) = evaluate(&root)?;
    let mut tree = vec![TreeNode {
        id: 0,
        parent: None,
        depth: 0,
        label: "root".into(),
        bound: b,
        status: if elim { NodeStatus::Eliminated } else { NodeStatus::Open },
        unstable,
    }];
    let mut frontier: Vec<(usize, LpModel)> = if elim { vec![] } else { vec![(0, root)] };
    let mut budget_exhausted = false;
    let levels = rules.len().min(strategy.depth_cap);
    for (depth, rule) in rules.iter().enumerate().take(levels) {
        if frontier.is_empty() {
            break;
        }
        let mut kids: Vec<(usize, String, LpModel)> = Vec::new();
        let mut passed: Vec<(usize, LpModel)> = Vec::new();
        for (id, m) in frontier {
            if applied(&m, rule) {
                passed.push((id, m));
                continue;
            }
            for (label, c) in branch(&m, rule)? {
                kids.push((id, label, c));
            }
        }
        if tree.len() + kids.len() > strategy.max_nodes {
            budget_exhausted = true;
            break;
        }
        let solved = strategy.exec.map(&kids, |(_, _, c)| evaluate(c));
        let mut next = passed;
        for ((parent, label, c), r) in kids.into_iter().zip(solved) {
            let (b, elim, unstable) = r?;
            tree[parent].status = NodeStatus::Branched;
            let id = tree.len();
            tree.push(TreeNode {
                id,
                parent: Some(parent),
                depth: depth + 1,
                label,
                bound: b,
                status: if elim { NodeStatus::Eliminated } else { NodeStatus::Open },
                unstable,
            });
            if !elim {
                next.push((id, c));
            }
        }
        frontier = next;
    }
    let bound = tree
        .iter()
        .filter(|n| n.status != NodeStatus::Branched)
        .map(|n| n.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let verdict = if tree.iter().all(|n| n.status != NodeStatus::Open) {
        Verdict::Eliminated
    } else {
        Verdict::NotEliminated
    };
    Ok(BoundReport {
        bound,
        verdict,
        tree,
        budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planegraph::catalog;

    fn toy() -> IneqDb {
        IneqDb::parse(include_str!("../../data/toy.db")).unwrap()
    }

    #[test]
    fn empty_strategy_not_eliminated() {
        for (name, g) in catalog::all() {
            if !crate::tame::check_tame(&g).unwrap().is_tame() {
                continue;
            }
            let r = bound_graph(&g, &IneqDb::default(), &Strategy::default()).unwrap();
            assert_eq!(r.verdict, Verdict::NotEliminated, "{name}");
            assert!(r.bound.is_finite(), "{name}");
            assert_eq!(r.tree.len(), 1);
        }
    }

    #[test]
    fn toy_db_cuboctahedron_extremal() {
        let t = constants();
        let r = bound_graph(&catalog::cuboctahedron(), &toy(), &Strategy::default()).unwrap();
        assert!((r.bound - t.eight_pt).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::NotEliminated);
    }

    #[test]
    fn toy_db_eliminates_cube() {
        let r = bound_graph(&catalog::cube(), &toy(), &Strategy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Eliminated);
        assert_eq!(r.tree[0].status, NodeStatus::Eliminated);
    }

    #[test]
    fn script_roundtrip() {
        let s = Strategy::parse(
            "# levels\ndepth-cap 3\nmax-nodes 50\nrule triangle-ysum\nrule quad-4case 2\nrule upright-height y.0 y.1 e.0.1\nrule typeA-3case y.0 y.1\n",
        )
        .unwrap();
        assert_eq!(s.depth_cap, 3);
        assert_eq!(s.rules.len(), 4);
        assert_eq!(Strategy::parse(&s.emit()).unwrap().rules, s.rules);
        assert!(matches!(
            Strategy::parse("depth-cap 1\nrule sideways\n"),
            Err(LpError::Strategy { line: 2, .. })
        ));
    }

    #[test]
    fn branching_tree_and_budget() {
        let g = catalog::octahedron();
        let s = Strategy {
            rules: vec![RuleSpec::AllTriangles],
            depth_cap: 3,
            ..Strategy::default()
        };
        let r = bound_graph(&g, &IneqDb::default(), &s).unwrap();
        assert_eq!(r.tree.len(), 1 + 2 + 4 + 8);
        for n in &r.tree[1..] {
            assert!(n.bound <= r.tree[n.parent.unwrap()].bound + 1e-9);
        }
        assert!(!r.budget_exhausted);
        let tight = Strategy { max_nodes: 5, ..s };
        let r = bound_graph(&g, &IneqDb::default(), &tight).unwrap();
        assert!(r.budget_exhausted);
        assert_eq!(r.verdict, Verdict::NotEliminated);
        assert!(r.log().ends_with("budget exhausted\n"));
    }

    #[test]
    fn sequential_equals_parallel() {
        let g = catalog::cuboctahedron();
        let mut s = Strategy::parse("depth-cap 2\nrule quad-4case\n").unwrap();
        s.exec = Exec::Sequential;
        let a = bound_graph(&g, &toy(), &s).unwrap();
        s.exec = Exec::Parallel;
        let b = bound_graph(&g, &toy(), &s).unwrap();
        assert_eq!(a, b);
    }
}
