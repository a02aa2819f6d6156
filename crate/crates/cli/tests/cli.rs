use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    header: String,
    body: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_tamegraph")).args(args).output().unwrap();
    let stdout = String::from_utf8(o.stdout).unwrap();
    let (header, body) = stdout.split_once('\n').unwrap_or((&stdout, ""));
    Run {
        code: o.status.code().unwrap(),
        header: header.to_string(),
        body: body.to_string(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

/// Runs twice, once sequential and once on the default pool, and checks the
/// outputs agree below the header line.
fn run_stable(args: &[&str]) -> Run {
    let a = run(args);
    let mut seq = vec!["--jobs", "1"];
    seq.extend_from_slice(args);
    let b = run(&seq);
    assert_eq!(a.code, b.code, "{args:?}");
    assert_eq!(a.body, b.body, "{args:?}");
    assert!(a.header.contains(" tamegraph ") && a.header.contains(" at "), "{}", a.header);
    a
}

#[test]
fn constants_dump() {
    let r = run_stable(&["constants", "dump"]);
    assert_eq!(r.code, 0);
    assert!(r.header.starts_with("# tamegraph"));
    assert!(r.body.lines().any(|l| l == "t0=1.255"));
    assert!(r.body.lines().all(|l| l.contains('=')));
}

#[test]
fn graph_canon_is_idempotent() {
    let r = run_stable(&["graph", "canon", &fixture("fcc_hcp.archive")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.body.lines().count(), 2);
    let dir = tempfile::tempdir().unwrap();
    let lines: Vec<&str> = r.body.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    let p = dir.path().join("canon.archive");
    std::fs::write(&p, lines.join("\n") + "\n").unwrap();
    let again = run(&["graph", "canon", p.to_str().unwrap()]);
    assert_eq!(again.body, r.body);
    assert_eq!(run(&["graph", "canon", "cuboctahedron"]).body.lines().next(), r.body.lines().next());
}

#[test]
fn tame_check_fcc_hcp() {
    let r = run_stable(&["tame", "check", &fixture("fcc_hcp.archive")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<Vec<&str>> = r.body.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row[1..8].iter().all(|v| *v == "pass"), "{row:?}");
        let w: f64 = row[8].parse().unwrap();
        assert!((w - 14.268).abs() < 1e-9);
    }
}

#[test]
fn tame_check_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.archive");
    std::fs::write(&p, "0 1 2;0 2 3;0 3 1;1 3 2\n").unwrap();
    let r = run(&["tame", "check", p.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let row: Vec<&str> = r.body.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[6], "fail");
}

#[test]
fn enumerate_and_diff() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.archive");
    let b = dir.path().join("b.archive");
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let r1 = run(&["enumerate", "--max-vertices", "7", "--faces", "tri-quad", "--out", a]);
    let r2 = run(&["--jobs", "1", "enumerate", "--max-vertices", "7", "--faces", "tri-quad", "--out", b]);
    assert_eq!((r1.code, r2.code), (0, 0), "{}", r1.stderr);
    assert_eq!(r1.body, r2.body);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(r1.body.contains("partial\tfalse"));
    let same = run(&["archive", "diff", a, b]);
    assert_eq!((same.code, same.body.as_str()), (0, ""));
    let other = run(&["archive", "diff", a, &fixture("fcc_hcp.archive")]);
    assert_eq!(other.code, 1);
    assert_eq!(other.body.lines().filter(|l| l.starts_with("- ")).count(), 2);
    let unpruned = run(&["enumerate", "--max-vertices", "7", "--faces", "tri-quad", "--no-prune", "all"]);
    assert_eq!(unpruned.code, 0);
    let c = dir.path().join("c.archive");
    std::fs::write(&c, &unpruned.body).unwrap();
    assert_eq!(run(&["archive", "diff", a, c.to_str().unwrap()]).code, 0);
    let capped = run(&["enumerate", "--max-vertices", "7", "--max-states", "5"]);
    assert_eq!(capped.code, 1);
    assert!(capped.body.contains("partial"));
}

#[test]
fn lp_build_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.lp");
    let p = p.to_str().unwrap();
    let b = run(&["lp", "build", "--graph", "cuboctahedron", "--db", &fixture("toy.db"), "--out", p]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    let text = std::fs::read_to_string(p).unwrap();
    assert!(text.contains("Maximize") && text.contains("Subject To") && text.contains("Bounds"));
    let s = run_stable(&["lp", "solve", p]);
    assert_eq!(s.code, 0);
    let value: f64 = s.body.lines().nth(1).unwrap().strip_prefix("value\t").unwrap().parse().unwrap();
    assert!((value - 0.442989).abs() < 1e-5);
    let stdout = run(&["lp", "build", "--graph", &fixture("gpent.graph")]);
    assert!(stdout.header.starts_with("\\ tamegraph"));
    assert!(stdout.body.starts_with("\\ model"));
}

#[test]
fn lp_solve_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.lp");
    std::fs::write(&p, "Maximize\n obj: + 1 x\nSubject To\n r0: + 1 x <= -1\nBounds\n 0 <= x <= 5\nEnd\n").unwrap();
    let r = run(&["lp", "solve", p.to_str().unwrap()]);
    assert_eq!((r.code, r.body.as_str()), (1, "status\tinfeasible\n"));
}

#[test]
fn lp_bound_verdicts() {
    let gpent = run_stable(&["lp", "bound", "--graph", &fixture("gpent.graph"), "--db", &fixture("toy.db")]);
    assert_eq!(gpent.code, 1);
    assert!(gpent.body.starts_with("verdict\tnot-eliminated\n"));
    let cube = run(&["lp", "bound", "--graph", "cube", "--db", &fixture("toy.db")]);
    assert_eq!(cube.code, 0);
    assert!(cube.body.starts_with("verdict\teliminated\n"));
    let tree = run_stable(&[
        "lp",
        "bound",
        "--graph",
        "octahedron",
        "--db",
        &fixture("toy.db"),
        "--strategy",
        &fixture("branch.strategy"),
    ]);
    let nodes: usize = tree.body.lines().nth(3).unwrap().strip_prefix("nodes\t").unwrap().parse().unwrap();
    assert!(nodes > 1);
}

#[test]
fn lp_derive() {
    let db = fixture("toy.db");
    let yes = run(&["lp", "derive", "--graph", "cuboctahedron", "--db", &db, "--term", "sigma.3=1", "--le", "0.06"]);
    assert_eq!(yes.code, 0, "{}", yes.stderr);
    assert!(yes.body.starts_with("proven\t"));
    let no = run(&["lp", "derive", "--graph", "cuboctahedron", "--db", &db, "--term", "sigma.3=1", "--le", "0.05"]);
    assert_eq!(no.code, 1);
    assert!(no.body.starts_with("unproven\t"));
    let ge = run(&["lp", "derive", "--graph", "cuboctahedron", "--term", "sol.0=1", "--ge", "-1"]);
    assert_eq!(ge.code, 0, "{}", ge.stderr);
}

#[test]
fn verify_run_small() {
    let r = run_stable(&["verify", "run", &fixture("small.specs")]);
    assert_eq!(r.code, 1);
    let rows: Vec<Vec<&str>> = r.body.lines().filter(|l| !l.starts_with('#')).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0], ["id", "status", "cells", "seconds"]);
    assert_eq!((rows[1][1], rows[1][3]), ("proven", "-"));
    assert_eq!(rows[2][..3], ["perimeter", "proven", "1"]);
    assert_eq!(rows[3][1], "failed");
    assert!(r.body.contains("# too-strong witness "));
    let timed = run(&["--timing", "verify", "run", &fixture("small.specs")]);
    let secs = timed.body.lines().nth(1).unwrap().split('\t').nth(3).unwrap();
    assert!(secs.parse::<f64>().is_ok());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["tame", "check", "/no/such/file"]).code, 2);
    assert_eq!(run(&["enumerate", "--max-vertices", "5", "--no-prune", "bogus"]).code, 2);
    assert_eq!(run(&["enumerate", "--max-vertices", "5", "--faces", "hex"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.specs");
    std::fs::write(&p, "(spec x (assert (< dih)))").unwrap();
    let r = run(&["verify", "run", p.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("1:17"), "{}", r.stderr);
}

#[test]
fn run_log_records() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("run.jsonl");
    let log = log.to_str().unwrap();
    let r = run(&["--log", log, "tame", "check", &fixture("fcc_hcp.archive")]);
    assert_eq!(r.code, 0);
    run(&["--log", log, "verify", "run", &fixture("small.specs")]);
    let text = std::fs::read_to_string(log).unwrap();
    let recs: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let kinds: Vec<&str> = recs.iter().map(|v| v["record"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["config", "graph", "graph", "end", "config", "spec", "spec", "spec", "end"]);
    assert_eq!(recs[0]["config"]["command"]["Tame"]["Check"]["archive"], fixture("fcc_hcp.archive"));
    assert_eq!(recs[1]["flags"], "1111111");
}
