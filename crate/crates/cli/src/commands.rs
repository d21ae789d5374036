//! Subcommand implementations. Each builds a [`VerificationReport`] and
//! prints a human-readable summary; the report goes to `--json` if given.

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use matroid_exchange::audit::{self, AuditConfig, AuditSummary};
use matroid_exchange::fiber::{
    find_exchange_path, verify_sequence, verify_up_to, BasisTuple, ExchangeSequence, Relation,
};
use matroid_exchange::io::{self, to_json, CheckRecord, VerificationReport};
use matroid_exchange::matrix::from_matrix;
use matroid_exchange::polytope::{cut_check, exchange_edges, geometric_edges, ggms_check, to_dot, vertices};
use matroid_exchange::removal::{
    is_removable, is_removable_after_simplify, removable_bases, remove_basis, sparse_paving_chain,
    sparse_paving_report, RemovalError, SparsePavingChain,
};
use matroid_exchange::rewriter::{RemovalContext, RewriteError, TypeBRelation};
use matroid_exchange::{ElemSet, Matroid};

use crate::input::{load_data, load_matroid, parse_set, parse_sets};
use crate::{Cli, Command, PolytopeCheck, RewriteKind};

struct Session<'a> {
    cli: &'a Cli,
    offset: usize,
    report: VerificationReport,
}

impl<'a> Session<'a> {
    fn new(cli: &'a Cli, input: &[u8]) -> Self {
        Session { cli, offset: usize::from(cli.one_based), report: VerificationReport::new(input) }
    }

    fn show(&self, s: ElemSet) -> String {
        s.display_with_offset(self.offset)
    }

    fn show_list(&self, sets: &[ElemSet]) -> String {
        let parts: Vec<String> = sets.iter().map(|&s| self.show(s)).collect();
        format!("[{}]", parts.join(", "))
    }

    fn set(&self, text: &str) -> Result<ElemSet> {
        parse_set(text, self.offset)
    }

    #[allow(clippy::too_many_arguments)]
    fn record(&mut self, check: &str, parameters: Value, pass: bool, result: Value, witness: Option<Value>, start: Instant) {
        self.report.push(CheckRecord {
            check: check.into(),
            parameters,
            verdict: pass.into(),
            result,
            witness,
            seconds: self.cli.timings.then(|| start.elapsed().as_secs_f64()),
        });
    }

    fn finish(self) -> Result<bool> {
        if let Some(path) = &self.cli.json {
            io::write_json(path, &self.report)?;
        }
        Ok(self.report.passes())
    }
}

fn concat(parts: &[&[u8]]) -> Vec<u8> {
    parts.concat()
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => Ok(io::write_text(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Validate { matroid } => validate(cli, matroid),
        Command::Circuits { matroid } => circuits(cli, matroid),
        Command::RemoveBasis { matroid, basis, out } => remove(cli, matroid, basis, out.as_deref()),
        Command::Removable { matroid } => removable(cli, matroid),
        Command::SparsePaving { matroid, chain } => sparse_paving(cli, matroid, *chain),
        Command::ReplayChain { chain } => replay_chain(cli, chain),
        Command::FromMatrix { file, out } => matrix(cli, file, out.as_deref()),
        Command::Polytope { matroid, check } => polytope(cli, matroid, check),
        Command::White { matroid, max_degree, mode } => white(cli, matroid, *max_degree, *mode),
        Command::Rewrite { kind } => rewrite(cli, kind),
        Command::VerifyCert { matroid, cert, end } => verify_cert(cli, matroid, cert, end.as_deref()),
        Command::Ingest { catalog, n, r, out } => ingest(cli, catalog, *n, *r, out.as_deref()),
        Command::Audit { matroid, b, check, exhaustive_limit, samples, degree } => {
            let cfg = AuditConfig { seed: cli.seed, exhaustive_limit: *exhaustive_limit, samples: *samples };
            run_audit(cli, matroid, b, check, cfg, *degree)
        }
    }
}

fn validate(cli: &Cli, spec: &str) -> Result<bool> {
    let t = Instant::now();
    let (data, bytes) = load_data(spec)?;
    let mut s = Session::new(cli, &bytes);
    let params = json!({ "matroid": spec });
    match Matroid::from_data(&data) {
        Ok(m) => {
            let (loops, coloops) = m.loops_coloops();
            println!("valid matroid: n = {}, rank = {}, {} bases", m.n(), m.rank(), m.num_bases());
            println!("loops: {}  coloops: {}", s.show(loops), s.show(coloops));
            let result = json!({ "n": m.n(), "rank": m.rank(), "bases": m.num_bases(), "loops": loops, "coloops": coloops });
            s.record("validate", params, true, result, None, t);
        }
        Err(e) => {
            println!("not a matroid: {e}");
            s.record("validate", params, false, Value::Null, Some(json!({ "error": e.to_string() })), t);
        }
    }
    s.finish()
}

fn circuits(cli: &Cli, spec: &str) -> Result<bool> {
    let t = Instant::now();
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    let cs = l.matroid.circuits();
    for &c in &cs {
        println!("{}", s.show(c));
    }
    println!("{} circuits", cs.len());
    s.record("circuits", json!({ "matroid": spec }), true, json!({ "circuits": cs }), None, t);
    s.finish()
}

fn remove(cli: &Cli, spec: &str, basis: &str, out: Option<&Path>) -> Result<bool> {
    let t = Instant::now();
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    let b = s.set(basis)?;
    let m = &l.matroid;
    m.require_basis(b)?;
    let params = json!({ "matroid": spec, "basis": b });
    let cert = is_removable(m, b)?;
    match cert.witness {
        Some((p, q)) => {
            println!(
                "{} is not removable: ({} + {}) - {} is not a basis",
                s.show(b),
                s.show(b),
                p + s.offset,
                q + s.offset
            );
            s.record("remove-basis", params, false, Value::Null, Some(json!(cert)), t);
        }
        None => {
            let mb = remove_basis(m, b)?;
            eprintln!("removed {}: {} bases remain", s.show(b), mb.num_bases());
            emit(&io::matroid_to_json(&mb), out)?;
            s.record("remove-basis", params, true, json!({ "bases": mb.num_bases() }), None, t);
        }
    }
    s.finish()
}

fn removable(cli: &Cli, spec: &str) -> Result<bool> {
    let t = Instant::now();
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    let m = &l.matroid;
    let list = if m.has_loops_or_coloops() {
        eprintln!("note: loops and coloops present; deciding on the simplified matroid");
        m.bases()
            .iter()
            .copied()
            .filter(|&b| m.num_bases() > 1 && is_removable_after_simplify(m, b).is_ok_and(|c| c.removable()))
            .collect()
    } else {
        removable_bases(m)?
    };
    println!("{}", s.show_list(&list));
    s.record("removable", json!({ "matroid": spec }), true, json!({ "removable": list }), None, t);
    s.finish()
}

fn sparse_paving(cli: &Cli, spec: &str, chain: bool) -> Result<bool> {
    let t = Instant::now();
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    let rep = sparse_paving_report(&l.matroid);
    let params = json!({ "matroid": spec, "chain": chain });
    if rep.sparse_paving {
        println!("sparse paving: yes ({} circuit-hyperplanes)", rep.circuit_hyperplanes.len());
        let mut result = json!(rep);
        if chain {
            let c = sparse_paving_chain(&l.matroid)?;
            print!("{}", to_json(&c));
            result["chain"] = json!(c);
        }
        s.record("sparse-paving", params, true, result, None, t);
    } else {
        println!(
            "sparse paving: no; {} is neither a basis nor a circuit-hyperplane",
            s.show(rep.violations[0])
        );
        let witness = json!({ "set": rep.violations[0] });
        s.record("sparse-paving", params, false, json!(rep), Some(witness), t);
    }
    s.finish()
}

fn replay_chain(cli: &Cli, path: &Path) -> Result<bool> {
    let t = Instant::now();
    let bytes = io::read_text(path)?.into_bytes();
    let mut s = Session::new(cli, &bytes);
    let chain: SparsePavingChain = io::read_json(path)?;
    let params = json!({ "chain": path });
    match chain.replay() {
        Ok(ms) => {
            for (k, (b, m)) in chain.removed.iter().zip(&ms[1..]).enumerate() {
                println!("step {}: removed {} -> {} bases", k + 1, s.show(*b), m.num_bases());
            }
            let last = ms.last().expect("replay yields the uniform matroid");
            s.record("replay-chain", params, true, json!({ "target": last.to_data() }), None, t);
        }
        Err(e @ RemovalError::ChainStep { .. }) => {
            println!("chain fails: {e}");
            s.record("replay-chain", params, false, Value::Null, Some(json!({ "error": e.to_string() })), t);
        }
        Err(e) => return Err(e.into()),
    }
    s.finish()
}

fn matrix(cli: &Cli, file: &Path, out: Option<&Path>) -> Result<bool> {
    let t = Instant::now();
    let bytes = io::read_text(file)?.into_bytes();
    let mut s = Session::new(cli, &bytes);
    let a = io::read_matrix(file)?;
    let m = from_matrix(&a)?;
    eprintln!("rank {} on {} columns, {} bases", m.rank(), m.n(), m.num_bases());
    emit(&io::matroid_to_json(&m), out)?;
    s.record("from-matrix", json!({ "file": file }), true, json!(m.to_data()), None, t);
    s.finish()
}

fn polytope(cli: &Cli, spec: &str, check: &PolytopeCheck) -> Result<bool> {
    let t = Instant::now();
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    let m = &l.matroid;
    match check {
        PolytopeCheck::Edges { dot } => {
            let vs = vertices(m);
            let mut ex = exchange_edges(m);
            let mut geo = geometric_edges(&vs);
            ex.sort_unstable();
            geo.sort_unstable();
            let pass = ex == geo;
            println!("{} exchange edges, {} geometric edges: {}", ex.len(), geo.len(), if pass { "equal" } else { "DIFFER" });
            if let Some(path) = dot {
                io::write_text(path, &to_dot(&vs, &geo, s.offset))?;
            }
            let pairs = |es: &[(usize, usize)]| -> Vec<(ElemSet, ElemSet)> {
                es.iter().map(|&(i, j)| (vs.vertices[i], vs.vertices[j])).collect()
            };
            let witness = (!pass).then(|| {
                let only_ex: Vec<_> = ex.iter().filter(|e| !geo.contains(e)).copied().collect();
                let only_geo: Vec<_> = geo.iter().filter(|e| !ex.contains(e)).copied().collect();
                json!({ "exchange_only": pairs(&only_ex), "geometric_only": pairs(&only_geo) })
            });
            s.record("polytope-edges", json!({ "matroid": spec }), pass, json!({ "edges": pairs(&geo) }), witness, t);
        }
        PolytopeCheck::Ggms { without } => {
            let mut vs = vertices(m);
            let mut params = json!({ "matroid": spec });
            if let Some(text) = without {
                let v = s.set(text)?;
                m.require_basis(v)?;
                vs = vs.without(v);
                params["without"] = json!(v);
            }
            let verdict = ggms_check(&vs)?;
            match &verdict.violation {
                None => println!("every edge is parallel to some e_i - e_j"),
                Some(v) => println!("edge {} -- {} is not parallel to any e_i - e_j", s.show(v.v), s.show(v.w)),
            }
            let witness = verdict.violation.as_ref().map(|v| json!(v));
            s.record("ggms", params, verdict.passes(), Value::Null, witness, t);
        }
        PolytopeCheck::Cut { basis } => {
            let b = s.set(basis)?;
            let rep = cut_check(m, b)?;
            println!(
                "{} exchange neighbours, all on the hyperplane: {}; geometric edges crossing below: {}",
                rep.exchange_neighbors.len(),
                rep.neighbors_on_hyperplane,
                s.show_list(&rep.crossing_edges)
            );
            let pass = rep.passes();
            let witness = (!pass).then(|| json!({ "crossing_edges": rep.crossing_edges }));
            s.record("cut", json!({ "matroid": spec, "basis": b }), pass, json!(rep), witness, t);
        }
    }
    s.finish()
}

fn white(cli: &Cli, spec: &str, max_degree: usize, mode: matroid_exchange::MoveMode) -> Result<bool> {
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    if max_degree < 2 {
        bail!("--max-degree must be at least 2");
    }
    let t = Instant::now();
    let reports = verify_up_to(&l.matroid, max_degree, mode, cli.fiber_cap)?;
    for rep in reports {
        let failed: Vec<_> = rep.records.iter().filter(|r| !r.pass).collect();
        println!(
            "degree {}: {} fibers, {} tuples, {}",
            rep.degree,
            rep.fibers,
            rep.tuples,
            if rep.pass { "all connected".to_string() } else { format!("{} disconnected", failed.len()) }
        );
        let witness = failed.first().map(|r| json!(r));
        if let Some(r) = failed.first() {
            if let Some((a, b)) = &r.witness {
                println!("  {} and {} lie in different components", a.display_with_offset(s.offset), b.display_with_offset(s.offset));
            }
        }
        let params = json!({ "matroid": spec, "degree": rep.degree, "mode": mode, "fiber_cap": cli.fiber_cap });
        let pass = rep.pass;
        s.record("white", params, pass, json!({ "fibers": rep.fibers, "tuples": rep.tuples, "records": rep.records }), witness, t);
    }
    if s.report.passes() {
        println!("verified up to degree {max_degree} ({mode} moves)");
    }
    s.finish()
}

fn context(cli: &Cli, m: &Matroid, b: ElemSet) -> Result<RemovalContext> {
    let ctx = RemovalContext::new(m, b).context("cannot remove the basis")?;
    Ok(ctx.with_cap(cli.fiber_cap))
}

fn print_sequence(s: &Session, seq: &ExchangeSequence) {
    let tuples = seq.tuples().unwrap_or_default();
    println!("start: {}", seq.start.display_with_offset(s.offset));
    for (k, step) in seq.steps.iter().enumerate() {
        let label = seq.case_trace.get(k).map(|l| format!("  [{l}]")).unwrap_or_default();
        let after = tuples.get(k + 1).map(|t| t.display_with_offset(s.offset)).unwrap_or_default();
        println!(
            "{:>3}. {} <-> {} between members {} and {}: {}{}",
            k + 1,
            step.x + s.offset,
            step.y + s.offset,
            step.i,
            step.j,
            after,
            label
        );
    }
    println!("{} steps", seq.len());
}

fn rewrite(cli: &Cli, kind: &RewriteKind) -> Result<bool> {
    let t = Instant::now();
    let (spec, b_text, extra, cert) = match kind {
        RewriteKind::Quadratic { matroid, b, cert, .. }
        | RewriteKind::TypeB { matroid, b, cert, .. }
        | RewriteKind::SingleB { matroid, b, cert, .. } => (matroid, b, None, cert),
        RewriteKind::Lift { matroid, b, relation, cert, .. } | RewriteKind::PushDown { matroid, b, relation, cert } => {
            (matroid, b, Some(relation), cert)
        }
    };
    let l = load_matroid(spec)?;
    let extra_bytes = match extra {
        Some(p) => io::read_text(p)?.into_bytes(),
        None => Vec::new(),
    };
    let mut s = Session::new(cli, &concat(&[&l.bytes, &extra_bytes]));
    let b = s.set(b_text)?;
    let ctx = context(cli, &l.matroid, b)?;
    let (check, params, outcome, end, in_reduced) = match kind {
        RewriteKind::Quadratic { bases, .. } => {
            let v = parse_sets(bases, s.offset)?;
            let out = ctx.rewrite_quadratic(v[0], v[1], v[2], v[3], v[4]);
            ("rewrite-quadratic", json!({ "b": b, "bases": v }), out, BasisTuple(vec![v[3], v[4]]), true)
        }
        RewriteKind::TypeB { bases, .. } => {
            let v = parse_sets(bases, s.offset)?;
            let rel = TypeBRelation { b, b1: v[0], b2: v[1], b1p: v[2], b2p: v[3] };
            let out = ctx.eliminate_type_b(&rel);
            ("rewrite-type-b", json!({ "relation": rel }), out, BasisTuple(vec![b, v[2], v[3]]), false)
        }
        RewriteKind::SingleB { bases, .. } => {
            let v = parse_sets(bases, s.offset)?;
            let out = ctx.eliminate_single_b(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
            ("rewrite-single-b", json!({ "b": b, "bases": v }), out, BasisTuple(vec![v[4], v[5], v[6]]), true)
        }
        RewriteKind::Lift { relation, hint, .. } => {
            let rel: Relation = io::read_json(relation)?;
            let hint = match hint {
                Some(p) => io::read_json(p)?,
                None => find_exchange_path(&l.matroid, &rel.lhs, &rel.rhs, cli.fiber_cap)
                    .context("no hint sequence in the parent matroid")?,
            };
            let out = ctx.lift_relation(&rel, &hint);
            ("rewrite-lift", json!({ "b": b, "relation": rel, "hint": hint }), out, rel.rhs.clone(), true)
        }
        RewriteKind::PushDown { relation, .. } => {
            let rel: Relation = io::read_json(relation)?;
            let out = ctx.push_down_relation(&rel);
            ("rewrite-push-down", json!({ "b": b, "relation": rel }), out, rel.rhs.clone(), false)
        }
    };
    match outcome {
        Ok(seq) => {
            let target = if in_reduced { ctx.reduced() } else { ctx.parent() };
            verify_sequence(target, &seq, &end).context("emitted certificate does not replay")?;
            print_sequence(&s, &seq);
            if let Some(path) = cert {
                io::write_json(path, &seq)?;
            }
            s.record(check, params, true, json!({ "certificate": seq }), None, t);
        }
        Err(e @ (RewriteError::OracleFailure { .. } | RewriteError::NoExchange { .. })) => {
            println!("{e}");
            let relation = match &e {
                RewriteError::OracleFailure { relation, .. } => json!(relation),
                _ => Value::Null,
            };
            s.record(check, params, false, Value::Null, Some(json!({ "error": e.to_string(), "relation": relation })), t);
        }
        Err(e) => return Err(e.into()),
    }
    s.finish()
}

fn parse_tuple(s: &Session, text: &str) -> Result<BasisTuple> {
    Ok(BasisTuple(text.split(';').map(|p| s.set(p)).collect::<Result<_>>()?))
}

fn verify_cert(cli: &Cli, spec: &str, cert: &Path, end: Option<&str>) -> Result<bool> {
    let t = Instant::now();
    let l = load_matroid(spec)?;
    let cert_bytes = io::read_text(cert)?.into_bytes();
    let mut s = Session::new(cli, &concat(&[&l.bytes, &cert_bytes]));
    let seq: ExchangeSequence = io::read_json(cert)?;
    let params = json!({ "matroid": spec, "cert": cert, "end": end });
    let expected = match end {
        Some(text) => Ok(parse_tuple(&s, text)?),
        None => seq.end(),
    };
    let verdict = expected.and_then(|e| verify_sequence(&l.matroid, &seq, &e));
    match verdict {
        Ok(()) => {
            println!("certificate replays: {} steps", seq.len());
            s.record("verify-cert", params, true, json!({ "steps": seq.len() }), None, t);
        }
        Err(fault) => {
            println!("certificate rejected: {fault}");
            let witness = json!({ "step_index": fault.step_index(), "fault": fault });
            s.record("verify-cert", params, false, Value::Null, Some(witness), t);
        }
    }
    s.finish()
}

fn ingest(cli: &Cli, path: &Path, n: usize, r: usize, out: Option<&Path>) -> Result<bool> {
    let t = Instant::now();
    let text = io::read_text(path)?;
    let mut s = Session::new(cli, text.as_bytes());
    let cat = io::parse_catalog(&text, n, r);
    println!("{} matroids accepted, {} lines rejected", cat.matroids.len(), cat.rejected.len());
    for e in &cat.rejected {
        println!("  {e}");
    }
    if let Some(p) = out {
        let data: Vec<_> = cat.matroids.iter().map(|(_, m)| m.to_data()).collect();
        io::write_json(p, &data)?;
    }
    let pass = cat.rejected.is_empty();
    let lines: Vec<usize> = cat.matroids.iter().map(|(l, _)| *l).collect();
    let witness = (!pass).then(|| json!(cat.rejected));
    s.record("ingest", json!({ "catalog": path, "n": n, "r": r }), pass, json!({ "accepted_lines": lines }), witness, t);
    s.finish()
}

fn run_audit(cli: &Cli, spec: &str, b_text: &str, check: &str, cfg: AuditConfig, degree: usize) -> Result<bool> {
    let l = load_matroid(spec)?;
    let mut s = Session::new(cli, &l.bytes);
    let b = s.set(b_text)?;
    let ctx = context(cli, &l.matroid, b)?;
    let all = ["quadratic", "type-b", "single-b", "push-down", "lift"];
    let checks: Vec<&str> = match check {
        "all" => all.to_vec(),
        c if all.contains(&c) => vec![c],
        other => bail!("unknown audit {other:?}; expected one of {} or all", all.join(", ")),
    };
    for c in checks {
        let t = Instant::now();
        let summary: AuditSummary = match c {
            "quadratic" => audit::audit_quadratic(&ctx, &cfg),
            "type-b" => audit::audit_type_b(&ctx, &cfg),
            "single-b" => audit::audit_single_b(&ctx, &cfg),
            "push-down" => audit::audit_push_down(&ctx, &cfg),
            _ => audit::audit_lift(&ctx, degree)?,
        };
        println!(
            "{}: {} of {} instances ({}), max {} steps, {} failures, digest {}",
            summary.check,
            summary.audited,
            summary.instances,
            if summary.exhaustive { "exhaustive" } else { "sampled" },
            summary.max_steps,
            summary.failures.len(),
            &summary.digest[..16]
        );
        if let Some(f) = summary.failures.first() {
            println!("  first failure: {} on {}", f.error, f.instance);
        }
        let witness = summary.failures.first().map(|f| json!(f));
        let params = json!({ "b": b, "check": c, "seed": cfg.seed, "exhaustive_limit": cfg.exhaustive_limit, "samples": cfg.samples, "degree": degree });
        let pass = summary.passes();
        let mut result = json!(summary);
        result["failures"] = json!(summary.failures.len());
        s.record(&format!("audit-{c}"), params, pass, result, witness, t);
    }
    s.finish()
}
