//! One function per subcommand, each returning a [`Report`].

use std::fmt::Write as _;
use std::path::Path;

use partconj_core::constructions::{example, Certificate};
use partconj_core::edge::{
    admissible_types, edge_heuristic_check, published_types, trace_map_certificate, trace_map_images, EdgeVerdict,
    StateType,
};
use partconj_core::obstruction::{cross_check_families, enumerate_exceptional};
use partconj_core::solver::verify_pair;
use partconj_core::tensor::random_subspace;
use partconj_core::{condition_c, find_pair, Dim, Quadruple, SolveStatus, SolverConfig, Subspace};
use serde_json::{json, Value};

use crate::io::{self, CliError};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;

fn quad_json(q: &Quadruple) -> Value {
    json!({ "m": q.m, "n": q.n, "k": q.k, "l": q.l })
}

fn verdict_json(q: &Quadruple) -> Value {
    let v = condition_c(q);
    json!({
        "quadruple": quad_json(q),
        "verdict": v.kind.as_str(),
        "window": v.window.as_ref().map(|w| [*w.start(), *w.end()]),
        "values": v.values.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn condition(m: usize, n: usize, k: usize, l: usize) -> Result<Report, CliError> {
    let q = Quadruple::new(m, n, k, l)?;
    let v = condition_c(&q);
    let mut table = format!("quadruple   {q}\nverdict     {}\n", v.kind);
    match &v.window {
        Some(w) => {
            for (t, c) in w.clone().zip(&v.values) {
                writeln!(table, "  C^{{{k},{l}}}_{t} = {c}").unwrap();
            }
        }
        None => table.push_str("window      empty (k + l > m + n - 2)\n"),
    }
    let command = format!("condition {m} {n} {k} {l}");
    Ok(Report::new(command, &[], verdict_json(&q)).table(table))
}

pub fn scan(max_product: usize) -> Result<Report, CliError> {
    let found = enumerate_exceptional(max_product)?;
    let check = cross_check_families(&found, max_product);
    let mut table = format!("{} exceptional quadruples with m <= n, mn <= {max_product}\n", found.len());
    for q in &found {
        writeln!(table, "  {q}").unwrap();
    }
    writeln!(table, "family cross-check: {} ({} members checked)", if check.passed() { "PASS" } else { "FAIL" }, check.checked)
        .unwrap();
    for miss in &check.mismatches {
        writeln!(table, "  {miss}").unwrap();
    }
    let result = json!({
        "max_product": max_product,
        "count": found.len(),
        "quadruples": found.iter().map(quad_json).collect::<Vec<_>>(),
        "cross_check": { "passed": check.passed(), "checked": check.checked, "mismatches": check.mismatches },
    });
    let code = if check.passed() { EXIT_OK } else { EXIT_ERROR };
    Ok(Report::new(format!("scan {max_product}"), &[], result).table(table).exit_code(code))
}

pub enum PairSource<'a> {
    Files { d: &'a Path, e: &'a Path },
    Example(&'a str),
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::NoneAnalytic(a, b) => {
            format!("no witness exists: '{}' and '{}' cannot hold together", a.name(), b.name())
        }
        Certificate::Recipe => "witness constructible by the rank-one recipe".into(),
        Certificate::Unknown => "none".into(),
    }
}

fn config_command(cfg: &SolverConfig) -> String {
    format!("--seed {} --restarts {} --tol {:e} --max-iters {}{}", cfg.seed, cfg.restarts, cfg.tol_residual, cfg.max_iters, if cfg.trace { " --trace" } else { "" })
}

fn with_solver_meta(report: Report, cfg: &SolverConfig) -> Report {
    report
        .seed(cfg.seed)
        .tolerance("tol_residual", cfg.tol_residual)
        .tolerance("tol_sigma", cfg.tol_sigma)
}

pub fn find(source: PairSource<'_>, cfg: &SolverConfig) -> Result<Report, CliError> {
    let (d, e, label, inputs, certificate) = match source {
        PairSource::Files { d, e } => {
            let (dt, et) = (io::read_text(d)?, io::read_text(e)?);
            let (ds, es) = (io::parse_subspace(&dt)?, io::parse_subspace(&et)?);
            let label = format!("--d {} --e {}", d.display(), e.display());
            (ds, es, label, vec![dt.into_bytes(), et.into_bytes()], None)
        }
        PairSource::Example(name) => {
            let pair = example(name)?;
            (pair.d, pair.e, format!("--example {name}"), vec![], Some(pair.certificate))
        }
    };
    if d.dim() != e.dim() {
        return Err(CliError::Format(format!("D is {:?} but E is {:?}", d.dim(), e.dim())));
    }
    let dim = d.dim();
    let q = Quadruple::new(dim.m, dim.n, d.codim(), e.codim())?;
    let out = find_pair(&d, &e, cfg)?;
    let verified = verify_pair(&d, &e, &out.best, cfg.tol_residual);
    let mut result = json!({
        "status": out.status.as_str(),
        "residual": out.best.residual,
        "verified": verified,
        "x": io::vector(&out.best.x),
        "y": io::vector(&out.best.y),
        "obstruction": verdict_json(&q),
        "restarts_used": out.stats.restarts_used,
        "iterations": out.stats.iterations,
        "restart_best": out.stats.restart_best,
        "note": match out.status {
            SolveStatus::Found => "witness x y* in D with conj(x) y* in E",
            SolveStatus::NotFound => "search failed; this is not a proof that no witness exists",
        },
    });
    if let Some(c) = &certificate {
        result["certificate"] = json!(certificate_text(c));
    }
    if cfg.trace {
        result["traces"] = json!(out.stats.traces);
    }
    let mut table = format!(
        "pair        {q}  ({})\nstatus      {}\nresidual    {:.3e}\nrestarts    {}\niterations  {}\n",
        condition_c(&q).kind,
        out.status.as_str(),
        out.best.residual,
        out.stats.restarts_used,
        out.stats.iterations
    );
    if let Some(c) = &certificate {
        writeln!(table, "certificate {}", certificate_text(c)).unwrap();
    }
    if out.status == SolveStatus::Found {
        writeln!(table, "x           {:?}", io::vector(&out.best.x)).unwrap();
        writeln!(table, "y           {:?}", io::vector(&out.best.y)).unwrap();
    }
    let code = match out.status {
        SolveStatus::Found => EXIT_OK,
        SolveStatus::NotFound => EXIT_NOT_FOUND,
    };
    let command = format!("find {label} {}", config_command(cfg));
    let inputs: Vec<&[u8]> = inputs.iter().map(|b| b.as_slice()).collect();
    Ok(with_solver_meta(Report::new(command, &inputs, result), cfg).table(table).exit_code(code))
}

pub fn types(m: usize, n: usize) -> Result<Report, CliError> {
    let all = admissible_types(m, n)?;
    let published = published_types(m, n);
    let is_published = |t: &StateType| published.as_ref().map(|p| p.contains(t));
    let bound = 2 * m * n + 2 - m - n;
    let mut table = format!("types (p, q) not excluded for {m} x {n}, bound p + q <= {bound}\n");
    for t in &all {
        let mark = match is_published(t) {
            Some(true) => "  listed",
            _ => "",
        };
        writeln!(table, "  ({}, {}){}{mark}", t.p, t.q, if t.p + t.q == bound { "  on bound" } else { "" }).unwrap();
    }
    let missing: Vec<[usize; 2]> = published
        .iter()
        .flatten()
        .filter(|t| !all.contains(t))
        .map(|t| [t.p, t.q])
        .collect();
    if published.is_some() {
        writeln!(table, "published entries missing: {}", missing.len()).unwrap();
    }
    let result = json!({
        "m": m,
        "n": n,
        "bound": bound,
        "types": all.iter().map(|t| json!({
            "p": t.p,
            "q": t.q,
            "on_bound": t.p + t.q == bound,
            "published": is_published(t),
        })).collect::<Vec<_>>(),
        "published_list": published.as_ref().map(|p| p.iter().map(|t| [t.p, t.q]).collect::<Vec<_>>()),
        "published_missing": missing,
    });
    Ok(Report::new(format!("types {m} {n}"), &[], result).table(table))
}

pub fn trace_cert() -> Report {
    let passed = trace_map_certificate();
    let images = trace_map_images();
    let mut table = String::from("Phi(e_ij) for the 3 x 3 pair\n");
    let mut rows = Vec::new();
    for ((i, j), img) in &images {
        let mat: Vec<Vec<i64>> = img.row_iter().map(|r| r.iter().copied().collect()).collect();
        writeln!(table, "  e_{}{} -> {:?}", i + 1, j + 1, mat).unwrap();
        rows.push(json!({ "unit": [i + 1, j + 1], "image": mat }));
    }
    writeln!(table, "trace map: {}", if passed { "PASS" } else { "FAIL" }).unwrap();
    let result = json!({ "passed": passed, "images": rows });
    Report::new("trace-cert".into(), &[], result)
        .table(table)
        .exit_code(if passed { EXIT_OK } else { EXIT_ERROR })
}

pub fn edge_check(path: &Path, cfg: &SolverConfig, rank_tol: f64, ppt_tol: f64) -> Result<Report, CliError> {
    let text = io::read_text(path)?;
    let state = io::parse_state(&text)?;
    let r = edge_heuristic_check(&state, cfg, rank_tol, ppt_tol)?;
    let witness = r.witness_vector.as_ref().map(|v| {
        json!({ "x": io::vector(&r.outcome.best.x), "y": io::vector(&r.outcome.best.y), "product_vector": io::vector(v) })
    });
    let result = json!({
        "type": { "p": r.state_type.p, "q": r.state_type.q },
        "verdict": r.verdict.as_str(),
        "status": r.outcome.status.as_str(),
        "residual": r.outcome.best.residual,
        "restarts_used": r.outcome.stats.restarts_used,
        "witness": witness,
    });
    let table = format!(
        "type        ({}, {})\nverdict     {}\nresidual    {:.3e}\n",
        r.state_type.p,
        r.state_type.q,
        r.verdict.as_str(),
        r.outcome.best.residual
    );
    let code = match r.verdict {
        EdgeVerdict::NotEdge => EXIT_OK,
        EdgeVerdict::ConsistentWithEdge => EXIT_NOT_FOUND,
    };
    let command = format!("edge-check {} --rank-tol {rank_tol:e} --ppt-tol {ppt_tol:e} {}", path.display(), config_command(cfg));
    Ok(with_solver_meta(Report::new(command, &[text.as_bytes()], result), cfg)
        .tolerance("rank_tol", rank_tol)
        .tolerance("ppt_tol", ppt_tol)
        .table(table)
        .exit_code(code))
}

/// Subspace JSON for a seeded random subspace; not wrapped in a report so
/// the output can be fed back to `find`.
pub fn random_subspace_file(m: usize, n: usize, codim: usize, seed: u64) -> Result<String, CliError> {
    let s: Subspace = random_subspace(Dim::new(m, n)?, codim, seed)?;
    Ok(serde_json::to_string(&io::subspace_json(&s))?)
}

