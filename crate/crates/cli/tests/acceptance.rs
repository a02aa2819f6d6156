//! One `ACCEPTANCE <criterion>: PASS|FAIL` line per criterion. Each test
//! prints its line before asserting, so a red criterion still reports which
//! checks failed.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamegraph::constants::{constants, derived_constants};
use tamegraph::enumerate::{enumerate, EnumConfig, FaceSet};
use tamegraph::geometry::spec::{Cmp, Expr};
use tamegraph::geometry::{arc, delta6, dih, parse_specs, verify, Interval, Status};
use tamegraph::lp::relaxation::{alpha_name, sigma_name, sol_name, tau_name};
use tamegraph::lp::{bound_graph, build_relaxation, IneqDb, LpModel, Outcome, Rel, Strategy, Verdict};
use tamegraph::par::Exec;
use tamegraph::planegraph::{archive_diff, canonical_code, catalog};
use tamegraph::tame::{check_all, check_tame};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn new() -> Checks {
        Checks(Vec::new())
    }

    fn add(&mut self, label: impl Into<String>, ok: bool) {
        self.0.push((label.into(), ok));
    }

    /// Prints the criterion line and panics if any check failed.
    fn finish(self, criterion: &str) {
        let failed: Vec<&str> = self.0.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.as_str()).collect();
        let line = if failed.is_empty() {
            format!("ACCEPTANCE {criterion}: PASS ({} checks)", self.0.len())
        } else {
            format!("ACCEPTANCE {criterion}: FAIL [{}]", failed.join("; "))
        };
        let _ = writeln!(std::io::stdout(), "{line}");
        assert!(failed.is_empty(), "{line}");
    }
}

#[test]
fn constants_criterion() {
    let start = Instant::now();
    let t = derived_constants();
    let mut c = Checks::new();
    c.add(format!("pt {} within 1e-6 of 0.05537", t.pt), (t.pt - 0.05537).abs() <= 1e-6);
    c.add(format!("8pt {} within 1e-5 of 0.442989", t.eight_pt), (t.eight_pt - 0.442989).abs() <= 1e-5);
    let squander = 4.0 * PI * t.zeta - 8.0;
    c.add(format!("4 pi zeta - 8 = {squander} < 14.8"), squander < 14.8);
    c.add("D superadditivity", t.d_superadditivity_violations().is_empty());
    c.add("Z subadditivity", t.z_subadditivity_violations().is_empty());
    let secs = start.elapsed().as_secs_f64();
    c.add(format!("runtime {secs:.3}s < 1s"), secs < 1.0);
    c.finish("constants");
}

#[test]
fn tameness_criterion() {
    let start = Instant::now();
    let mut c = Checks::new();
    for name in ["cuboctahedron", "hcp", "icosahedron", "gpent"] {
        let r = check_tame(&catalog::by_name(name).unwrap()).unwrap();
        c.add(format!("{name} tame (failures {:?})", r.failures()), r.is_tame());
    }
    let w = check_tame(&catalog::cuboctahedron()).unwrap().min_weight.unwrap().total;
    c.add(format!("cuboctahedron min weight {w}"), (w - 14.268).abs() <= 1e-9);
    let f = check_tame(&catalog::tetrahedron()).unwrap().failures();
    c.add(format!("tetrahedron fails exactly property 6 (got {f:?})"), f == vec![6]);
    let secs = start.elapsed().as_secs_f64();
    c.add(format!("runtime {secs:.3}s < 5s"), secs < 5.0);
    c.finish("tameness");
}

#[test]
fn enumeration_criterion() {
    let mut c = Checks::new();
    for n in 4..=8 {
        for faces in [FaceSet::TriQuad, FaceSet::All] {
            let mut pruned = EnumConfig::new(n);
            pruned.faces = faces;
            let mut unpruned = EnumConfig::unpruned(n);
            unpruned.faces = faces;
            let d = archive_diff(&enumerate(&pruned).archive, &enumerate(&unpruned).archive);
            c.add(format!("n={n} {faces:?} pruned == unpruned"), d.is_empty());
        }
    }
    let mut cfg = EnumConfig::new(12);
    cfg.faces = FaceSet::TriQuad;
    let rep = enumerate(&cfg);
    c.add("n=12 run complete", !rep.partial);
    let graphs: Vec<_> = rep.archive.graphs().cloned().collect();
    let codes: Vec<_> = graphs.iter().map(canonical_code).collect();
    let distinct: BTreeSet<_> = codes.iter().collect();
    c.add(format!("no duplicate codes among {}", codes.len()), distinct.len() == codes.len());
    for name in ["cuboctahedron", "hcp"] {
        let code = canonical_code(&catalog::by_name(name).unwrap());
        c.add(format!("n=12 archive contains {name}"), distinct.contains(&code));
    }
    let bad = check_all(&graphs, Exec::default())
        .into_iter()
        .filter(|r| !r.as_ref().is_ok_and(|r| r.is_tame()))
        .count();
    c.add(format!("{bad} emitted graphs fail the tameness checker"), bad == 0);
    c.finish("enumeration");
}

/// Maximum of `c.x` over `A x <= b, x >= 0` from every basic solution.
fn vertex_oracle(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
    let n = c.len();
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().copied()).collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        rows.push((e, 0.0));
    }
    let dot = |r: &[f64], x: &DVector<f64>| r.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>();
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let mat = DMatrix::from_fn(n, n, |i, j| rows[pick[i]].0[j]);
        let rhs = DVector::from_fn(n, |i, _| rows[pick[i]].1);
        if let Some(x) = mat.lu().solve(&rhs) {
            if rows.iter().all(|(r, bb)| dot(r, &x) <= bb + 1e-9) {
                let v = dot(c, &x);
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        let Some(i) = (0..n).rev().find(|&i| pick[i] < rows.len() - n + i) else {
            return best;
        };
        pick[i] += 1;
        for k in i + 1..n {
            pick[k] = pick[k - 1] + 1;
        }
    }
}

fn random_lps_agree(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (m, n) = (5, 8);
    let mut mismatches = 0;
    for _ in 0..200 {
        let mut a: Vec<Vec<f64>> = Vec::new();
        let mut b = Vec::new();
        for i in 0..m {
            let range = if i < 3 { 0.1..2.0 } else { -2.0..2.0 };
            a.push((0..n).map(|_| rng.random_range(range.clone())).collect());
            b.push(if i < 3 { rng.random_range(1.0..10.0) } else { rng.random_range(-3.0..5.0) });
        }
        let obj: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..3.0)).collect();
        let mut lp = LpModel::new("random");
        let xs: Vec<usize> = (0..n).map(|j| lp.add_var(&format!("x{j}"), 0.0, f64::INFINITY)).collect();
        for (row, &rhs) in a.iter().zip(&b) {
            lp.add_row(xs.iter().copied().zip(row.iter().copied()).collect(), Rel::Le, rhs, "derived");
        }
        lp.set_objective(xs.iter().copied().zip(obj.iter().copied()).collect());
        let got = lp.solve().unwrap();
        let ok = match vertex_oracle(&a, &b, &obj) {
            Some(want) => got.value().is_some_and(|v| (v - want).abs() <= 1e-8 * (1.0 + want.abs())),
            None => got == Outcome::Infeasible,
        };
        mismatches += usize::from(!ok);
    }
    c.add(format!("{mismatches} of 200 random LPs disagree with the vertex oracle"), mismatches == 0);
}

fn identities_hold(c: &mut Checks) {
    let t = constants();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut worst: f64 = 0.0;
    for (_, g) in catalog::all() {
        for _ in 0..8 {
            let mut m = build_relaxation(&g, &IneqDb::default()).unwrap();
            let obj: Vec<(usize, f64)> = (0..m.vars.len()).map(|j| (j, rng.random_range(-1.0..1.0))).collect();
            m.set_objective(obj);
            let Outcome::Optimal { x, .. } = m.solve().unwrap() else {
                continue;
            };
            let val = |name: String| x[m.var(&name).unwrap()];
            for f in 0..g.face_count() {
                let r = val(tau_name(f)) - val(sol_name(f)) * t.zeta * t.pt + val(sigma_name(f));
                let s: f64 = g.face(f).iter().map(|&v| val(alpha_name(v, f))).sum::<f64>()
                    - (g.face(f).len() as f64 - 2.0) * PI
                    - val(sol_name(f));
                worst = worst.max(r.abs()).max(s.abs());
            }
            for v in 0..g.vertex_count() {
                let s: f64 = g.faces_at(v).iter().map(|&f| val(alpha_name(v, f))).sum();
                worst = worst.max((s - 2.0 * PI).abs());
            }
        }
    }
    c.add(format!("identity residual {worst:e}"), worst <= 1e-9);
}

#[test]
fn lp_criterion() {
    let mut c = Checks::new();
    random_lps_agree(&mut c);
    identities_hold(&mut c);
    let toy = IneqDb::parse(&std::fs::read_to_string(fixture("toy.db")).unwrap()).unwrap();
    let eight_pt = constants().eight_pt;
    let cubo = build_relaxation(&catalog::cuboctahedron(), &toy).unwrap().solve().unwrap().bound();
    c.add(format!("cuboctahedron bound {cubo} vs 8pt"), (cubo - eight_pt).abs() <= 1e-9);
    let cube = bound_graph(&catalog::cube(), &toy, &Strategy::default()).unwrap();
    c.add(
        "cube eliminated at the root",
        cube.verdict == Verdict::Eliminated && cube.tree.len() == 1,
    );
    let g = catalog::icosahedron();
    let m = build_relaxation(&g, &IneqDb::default()).unwrap();
    let up: Vec<(usize, f64)> = (0..g.face_count()).map(|f| (m.var(&sol_name(f)).unwrap(), 1.0)).collect();
    c.add("sum sol <= 4 pi derived", m.derive_inequality(&up, 4.0 * PI).unwrap().is_proven());
    c.add("sum sol <= 4 pi - 1e-6 refuted", !m.derive_inequality(&up, 4.0 * PI - 1e-6).unwrap().is_proven());
    let strategy = Strategy::parse(&std::fs::read_to_string(fixture("branch.strategy")).unwrap()).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut nodes = 0;
    for name in ["octahedron", "cuboctahedron", "gpent", "hcp"] {
        let r = bound_graph(&catalog::by_name(name).unwrap(), &toy, &strategy).unwrap();
        for n in &r.tree {
            if let Some(p) = n.parent {
                worst = worst.max(n.bound - r.tree[p].bound);
                nodes += 1;
            }
        }
    }
    c.add(format!("{nodes} children, worst excess over parent {worst:e}"), nodes > 0 && worst <= 1e-9);
    c.finish("lp");
}

#[test]
fn interval_verification_criterion() {
    let start = Instant::now();
    let mut c = Checks::new();
    let specs = parse_specs(&std::fs::read_to_string(fixture("appendix.specs")).unwrap()).unwrap();
    for s in &specs {
        let r = verify(s, 1_000_000, Exec::default());
        c.add(format!("{} {} in {} cells", s.id, r.status, r.cells), r.status == Status::Proven);
    }
    let secs = start.elapsed().as_secs_f64();
    c.add(format!("total {secs:.1}s <= 600s"), secs <= 600.0);

    let two = Interval::point(2.0);
    let perimeter = Interval::point(2.0) * arc(two, two, Interval::around(2.51))
        + Interval::point(2.0) * arc(two, two, two)
        + arc(two, two, Interval::around(2.387));
    c.add("arc perimeter below 2 pi", perimeter.hi < (Interval::point(2.0) * Interval::pi()).lo);
    let sq = |v: f64| Interval::around(v).sq();
    let a = delta6([sq(3.23), sq(2.0), sq(2.0), sq(3.23), sq(2.0), sq(3.2)]);
    c.add("first delta sign", a.hi < 0.0);
    let b = delta6([sq(2.0), sq(2.0), Interval::point(8.0), sq(2.51), sq(2.51), sq(3.46)]);
    c.add("second delta sign", b.hi < 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut proven = 0;
    let mut planted = 0;
    for spec in specs.iter().filter(|s| matches!(s.assert.lhs, Expr::Prim(..))) {
        let bx = spec.domain_box();
        let mut k = 0;
        while k < 3 {
            let y: [f64; 6] = std::array::from_fn(|i| rng.random_range(bx[i].lo..=bx[i].hi));
            if !(delta6(y.map(|v| v * v)) > 1e-3) {
                continue;
            }
            let v = dih(y);
            let shifted = match spec.assert.cmp {
                Cmp::Lt | Cmp::Le => v - 1e-3,
                Cmp::Gt | Cmp::Ge => v + 1e-3,
            };
            let mut s = spec.clone();
            s.assert.rhs = Expr::Num(format!("{shifted}"));
            proven += usize::from(verify(&s, 20_000, Exec::default()).status == Status::Proven);
            planted += 1;
            k += 1;
        }
    }
    c.add(format!("{proven} of {planted} planted false specs proven"), planted > 0 && proven == 0);
    c.finish("interval verification");
}

/// Stdout of the binary with the timestamp header removed.
fn body(args: &[&str]) -> String {
    let o = Command::new(env!("CARGO_BIN_EXE_tamegraph")).args(args).output().unwrap();
    let s = String::from_utf8(o.stdout).unwrap();
    s.split_once('\n').map_or(String::new(), |(_, b)| b.to_string())
}

#[test]
fn determinism_criterion() {
    let mut c = Checks::new();
    let (db, strategy) = (fixture("toy.db"), fixture("branch.strategy"));
    let runs: [(&str, Vec<&str>); 4] = [
        ("enumerate", vec!["enumerate", "--max-vertices", "7"]),
        ("tame check", vec!["tame", "check", "FIXTURE"]),
        ("lp bound", vec!["lp", "bound", "--graph", "octahedron", "--db", &db, "--strategy", &strategy]),
        ("verify run", vec!["verify", "run", "SPECS"]),
    ];
    let archive = fixture("fcc_hcp.archive");
    let specs = fixture("small.specs");
    for (name, args) in runs {
        let args: Vec<&str> = args
            .iter()
            .map(|a| match *a {
                "FIXTURE" => archive.as_str(),
                "SPECS" => specs.as_str(),
                a => a,
            })
            .collect();
        let first = body(&args);
        let again = body(&args);
        let mut seq = vec!["--jobs", "1"];
        seq.extend_from_slice(&args);
        let sequential = body(&seq);
        c.add(format!("{name} repeatable"), !first.is_empty() && first == again);
        c.add(format!("{name} sequential matches parallel"), first == sequential);
    }
    c.finish("determinism");
}
