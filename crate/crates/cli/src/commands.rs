use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};

use tamegraph::constants::constants;
use tamegraph::enumerate::{enumerate, EnumConfig, FaceSet, Prunes};
use tamegraph::geometry::{parse_specs, verify, Status};
use tamegraph::lp::{bound_graph, build_relaxation, parse_lp_text, to_lp_text, Derived, IneqDb, Outcome as LpOutcome, Strategy, Verdict};
use tamegraph::par::Exec;
use tamegraph::planegraph::{archive_diff, canonical_code, canonical_form, catalog, Archive, PlaneGraph};
use tamegraph::tame::check_all;

use crate::runlog::{Record, RunLog};
use crate::{ArchiveCmd, Command, ConstantsCmd, EnumerateArgs, GraphCmd, LpCmd, ModelArgs, Outcome, RunConfig, TameCmd, VerifyCmd};

/// Shortest round-trip decimal, with `inf` and `-inf` spelled out.
fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn write(path: &str, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {path}"))
}

fn archive(path: &str) -> Result<Archive> {
    Archive::parse(&read(path)?).with_context(|| format!("parsing {path}"))
}

/// A graph file (its first graph line) or a catalog name.
fn graph(spec: &str) -> Result<PlaneGraph> {
    if Path::new(spec).exists() {
        return archive(spec)?
            .graphs()
            .next()
            .cloned()
            .ok_or_else(|| anyhow!("{spec} holds no graph"));
    }
    catalog::by_name(spec).ok_or_else(|| anyhow!("{spec}: no such file or catalog graph"))
}

fn db(path: &Option<String>) -> Result<IneqDb> {
    match path {
        Some(p) => IneqDb::parse(&read(p)?).with_context(|| format!("parsing {p}")),
        None => Ok(IneqDb::default()),
    }
}

fn exec(cfg: &RunConfig) -> Exec {
    if cfg.jobs == 1 {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

/// Timestamp line, prefixed with the comment marker of the output format.
fn header(marker: &str, cfg: &RunConfig, started: &str) -> String {
    let verb = match &cfg.command {
        Command::Constants(_) => "constants dump",
        Command::Graph(_) => "graph canon",
        Command::Tame(_) => "tame check",
        Command::Enumerate(_) => "enumerate",
        Command::Archive(_) => "archive diff",
        Command::Lp(LpCmd::Build { .. }) => "lp build",
        Command::Lp(LpCmd::Solve { .. }) => "lp solve",
        Command::Lp(LpCmd::Bound { .. }) => "lp bound",
        Command::Lp(LpCmd::Derive { .. }) => "lp derive",
        Command::Verify(_) => "verify run",
    };
    format!("{marker} tamegraph {} {verb} at {started}\n", env!("CARGO_PKG_VERSION"))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let mut log = RunLog::open(cfg, &started)?;
    let marker = match &cfg.command {
        Command::Lp(LpCmd::Build { .. }) => "\\",
        _ => "#",
    };
    let mut out = header(marker, cfg, &started);
    let outcome = match &cfg.command {
        Command::Constants(ConstantsCmd::Dump) => {
            out.push_str(&constants().dump());
            Outcome::Success
        }
        Command::Graph(GraphCmd::Canon { file }) => {
            let graphs: Vec<PlaneGraph> = if Path::new(file).exists() {
                archive(file)?.graphs().cloned().collect()
            } else {
                vec![graph(file)?]
            };
            for g in &graphs {
                let (code, h) = canonical_form(g);
                let _ = writeln!(out, "{}\t{}", code.hex(), h.to_line());
            }
            Outcome::Success
        }
        Command::Tame(TameCmd::Check { archive: path }) => tame_check(cfg, path, &mut out, &mut log)?,
        Command::Enumerate(a) => enumerate_cmd(cfg, a, &mut out, &mut log)?,
        Command::Archive(ArchiveCmd::Diff { a, b }) => {
            let d = archive_diff(&archive(a)?, &archive(b)?);
            out.push_str(&d.report());
            if d.is_empty() {
                Outcome::Success
            } else {
                Outcome::Negative
            }
        }
        Command::Lp(cmd) => lp(cfg, cmd, &mut out, &mut log)?,
        Command::Verify(VerifyCmd::Run { specs, budget }) => verify_run(cfg, specs, *budget, &mut out, &mut log)?,
    };
    print!("{out}");
    log.finish()?;
    Ok(outcome)
}

fn tame_check(cfg: &RunConfig, path: &str, out: &mut String, log: &mut RunLog) -> Result<Outcome> {
    let graphs: Vec<PlaneGraph> = archive(path)?.graphs().cloned().collect();
    let reports = check_all(&graphs, exec(cfg));
    out.push_str("code\tp1\tp2\tp3\tp4\tp5\tp6\tp7\tmin_weight\taudit\n");
    let mut all = true;
    for (g, r) in graphs.iter().zip(reports) {
        let r = r.map_err(|e| anyhow!("{}: {e}", g.to_line()))?;
        let code = canonical_code(g).hex();
        let w = r.min_weight.as_ref().map(|w| w.total);
        out.push_str(&code);
        for p in &r.properties {
            out.push_str(if p.pass { "\tpass" } else { "\tfail" });
        }
        let _ = writeln!(out, "\t{}\t{}", w.map_or("-".into(), num), r.audit_circuits.len());
        all &= r.is_tame();
        log.record(Record::Graph {
            code,
            flags: r.flags(),
            min_weight: w,
        })?;
    }
    Ok(if all { Outcome::Success } else { Outcome::Negative })
}

fn enumerate_cmd(cfg: &RunConfig, a: &EnumerateArgs, out: &mut String, log: &mut RunLog) -> Result<Outcome> {
    let mut ec = EnumConfig::new(a.max_vertices);
    ec.faces = match a.faces.as_str() {
        "tri-quad" => FaceSet::TriQuad,
        "all" => FaceSet::All,
        f => bail!("--faces must be tri-quad or all, not {f:?}"),
    };
    for p in &a.no_prune {
        if p == "all" {
            ec.prunes = Prunes::none();
        } else {
            ec.prunes.set(p, false).map_err(|e| anyhow!(e))?;
        }
    }
    ec.max_states = a.max_states;
    ec.exec = exec(cfg);
    let rep = enumerate(&ec);
    let graphs = rep.archive.graphs().count();
    log.record(Record::Enumeration {
        states: rep.states,
        terminals: rep.terminals,
        graphs,
        partial: rep.partial,
    })?;
    match &a.out {
        Some(p) => {
            write(p, &rep.archive.emit())?;
            let _ = writeln!(out, "states\t{}\nterminals\t{}\ngraphs\t{graphs}\npartial\t{}", rep.states, rep.terminals, rep.partial);
        }
        None => out.push_str(&rep.archive.emit()),
    }
    Ok(if rep.partial { Outcome::Negative } else { Outcome::Success })
}

fn lp(cfg: &RunConfig, cmd: &LpCmd, out: &mut String, log: &mut RunLog) -> Result<Outcome> {
    let model = |m: &ModelArgs| -> Result<_> {
        let g = graph(&m.graph)?;
        let d = db(&m.db)?;
        Ok((g, d))
    };
    match cmd {
        LpCmd::Build { model: m, out: path } => {
            let (g, d) = model(m)?;
            let text = to_lp_text(&build_relaxation(&g, &d)?);
            match path {
                Some(p) => write(p, &text)?,
                None => out.push_str(&text),
            }
            Ok(Outcome::Success)
        }
        LpCmd::Solve { file } => {
            let m = parse_lp_text(&read(file)?).with_context(|| format!("parsing {file}"))?;
            let o = m.solve()?;
            let status = match &o {
                LpOutcome::Optimal { .. } => "optimal",
                LpOutcome::Infeasible => "infeasible",
                LpOutcome::Unbounded => "unbounded",
            };
            let _ = writeln!(out, "status\t{status}");
            log.record(Record::Lp {
                status: status.into(),
                value: o.value().map(num),
            })?;
            if let LpOutcome::Optimal { value, x } = &o {
                let _ = writeln!(out, "value\t{}", num(*value));
                for (v, xi) in m.vars.iter().zip(x) {
                    let _ = writeln!(out, "{}\t{}", v.name, num(*xi));
                }
                Ok(Outcome::Success)
            } else {
                Ok(Outcome::Negative)
            }
        }
        LpCmd::Bound { model: m, strategy } => {
            let (g, d) = model(m)?;
            let mut s = match strategy {
                Some(p) => Strategy::parse(&read(p)?).with_context(|| format!("parsing {p}"))?,
                None => Strategy::default(),
            };
            s.exec = exec(cfg);
            let r = bound_graph(&g, &d, &s)?;
            let eliminated = r.verdict == Verdict::Eliminated;
            let _ = writeln!(
                out,
                "verdict\t{}\nbound\t{}\ntarget\t{}\nnodes\t{}",
                if eliminated { "eliminated" } else { "not-eliminated" },
                num(r.bound),
                num(constants().eight_pt),
                r.tree.len()
            );
            out.push_str(&r.log());
            for n in &r.tree {
                log.record(Record::Node {
                    id: n.id,
                    parent: n.parent,
                    depth: n.depth,
                    label: n.label.clone(),
                    bound: num(n.bound),
                    status: n.status.as_str().into(),
                })?;
            }
            Ok(if eliminated { Outcome::Success } else { Outcome::Negative })
        }
        LpCmd::Derive { model: m, terms, le, ge } => {
            let (g, d) = model(m)?;
            let lp = build_relaxation(&g, &d)?;
            let sign = if ge.is_some() { -1.0 } else { 1.0 };
            let bound = le.or(*ge).expect("clap requires one of --le, --ge");
            let mut target = Vec::new();
            for t in terms {
                let (name, c) = t.split_once('=').ok_or_else(|| anyhow!("term {t:?} is not name=coef"))?;
                let c: f64 = c.parse().with_context(|| format!("coefficient in {t:?}"))?;
                target.push((lp.var_or_err(name)?, sign * c));
            }
            let r = lp.derive_inequality(&target, sign * bound)?;
            let (word, max) = match r {
                Derived::Proven { max } => ("proven", max),
                Derived::Unproven { max } => ("unproven", max),
            };
            // report the extreme of the original left side
            let _ = writeln!(out, "{word}\textreme\t{}", num(sign * max));
            Ok(if r.is_proven() { Outcome::Success } else { Outcome::Negative })
        }
    }
}

fn verify_run(cfg: &RunConfig, path: &str, budget: usize, out: &mut String, log: &mut RunLog) -> Result<Outcome> {
    let specs = parse_specs(&read(path)?).with_context(|| format!("parsing {path}"))?;
    out.push_str("id\tstatus\tcells\tseconds\n");
    let mut all = true;
    for s in &specs {
        let t = Instant::now();
        let r = verify(s, budget, exec(cfg));
        let secs = t.elapsed().as_secs_f64();
        let shown = if cfg.timing { format!("{secs:.3}") } else { "-".into() };
        let _ = writeln!(out, "{}\t{}\t{}\t{shown}", s.id, r.status, r.cells);
        if let Status::Failed { witness } = &r.status {
            let w: Vec<String> = witness.iter().map(|v| num(*v)).collect();
            let _ = writeln!(out, "# {} witness {}", s.id, w.join(" "));
        }
        all &= r.status == Status::Proven;
        log.record(Record::Spec {
            id: s.id.clone(),
            status: r.status.name().into(),
            cells: r.cells,
            seconds: secs,
        })?;
    }
    Ok(if all { Outcome::Success } else { Outcome::Negative })
}
