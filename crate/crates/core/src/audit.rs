//! Batch audits of the rewriting constructions.
//!
//! Each audit generates instances for one removal `(M, b)`, runs the
//! construction, replays the result against the right matroid and checks
//! the structural invariants. Instance sets larger than the exhaustive limit
//! are sampled with a seeded generator, so summaries are reproducible.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fiber::{fiber, find_exchange_path, verify_sequence, BasisTuple, ExchangeSequence, Relation};
use crate::matroid::{Basis, Matroid};
use crate::rewriter::{DegreeFunction, RemovalContext, RewriteError, TypeBRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub seed: u64,
    /// Instance sets up to this size are audited exhaustively.
    pub exhaustive_limit: usize,
    /// Sample size used above the exhaustive limit.
    pub samples: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { seed: 0, exhaustive_limit: 100_000, samples: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub instance: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub check: String,
    pub removed: Basis,
    pub instances: usize,
    pub audited: usize,
    pub exhaustive: bool,
    pub max_steps: usize,
    pub cases: BTreeMap<String, usize>,
    pub failures: Vec<AuditFailure>,
    /// SHA-256 of the emitted certificates, in instance order.
    pub digest: String,
}

impl AuditSummary {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

type Outcome = Result<ExchangeSequence, String>;

fn summarize<I: std::fmt::Debug + Sync>(
    check: &str,
    ctx: &RemovalContext,
    total: usize,
    exhaustive: bool,
    instances: &[I],
    run: impl Fn(&I) -> Outcome + Sync,
) -> AuditSummary {
    let outcomes: Vec<Outcome> = instances.par_iter().map(&run).collect();
    let mut hasher = Sha256::new();
    let mut cases = BTreeMap::new();
    let mut failures = Vec::new();
    let mut max_steps = 0;
    for (inst, out) in instances.iter().zip(outcomes) {
        match out {
            Ok(seq) => {
                hasher.update(serde_json::to_vec(&seq).expect("serializable"));
                hasher.update(b"\n");
                max_steps = max_steps.max(seq.len());
                for label in &seq.case_trace {
                    *cases.entry(label.clone()).or_insert(0) += 1;
                }
            }
            Err(error) => {
                hasher.update(error.as_bytes());
                hasher.update(b"\n");
                failures.push(AuditFailure { instance: format!("{inst:?}"), error });
            }
        }
    }
    AuditSummary {
        check: check.to_string(),
        removed: ctx.removed(),
        instances: total,
        audited: instances.len(),
        exhaustive,
        max_steps,
        cases,
        failures,
        digest: hex(&hasher.finalize()),
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn choose<I: Clone>(all: Vec<I>, cfg: &AuditConfig, salt: u64) -> (usize, bool, Vec<I>) {
    let total = all.len();
    if total <= cfg.exhaustive_limit {
        return (total, true, all);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
    let picked = all.choose_multiple(&mut rng, cfg.samples).cloned().collect();
    (total, false, picked)
}

/// Replays `seq` in `m` from `start` to `end`; optionally rejects any tuple
/// containing `avoid`; enforces the step bound.
fn check_sequence(
    m: &Matroid,
    seq: &ExchangeSequence,
    end: &BasisTuple,
    avoid: Option<Basis>,
    max_len: Option<usize>,
) -> Result<(), String> {
    verify_sequence(m, seq, end).map_err(|f| format!("replay: {f}"))?;
    if let Some(b) = avoid {
        let tuples = seq.tuples().map_err(|f| f.to_string())?;
        if let Some(k) = tuples.iter().position(|t| t.contains(b)) {
            return Err(format!("tuple {k} contains the removed basis"));
        }
    }
    if let Some(l) = max_len {
        if seq.len() > l {
            return Err(format!("{} steps exceed the bound {l}", seq.len()));
        }
    }
    Ok(())
}

/// `b1 b2 -> b b2p -> b1p b2pp` with all five sides bases of `M_b`.
pub type QuadraticInstance = [Basis; 5];

/// Every exchange into `b` from a pair of `M_b` bases: `(b1, b2, b2p)`.
fn exchanges_into_b(ctx: &RemovalContext) -> Vec<(Basis, Basis, Basis, usize, usize)> {
    let (b, mb) = (ctx.removed(), ctx.reduced());
    let mut out = Vec::new();
    for &b2p in mb.bases() {
        for y in b.difference(b2p) {
            for x in b2p.difference(b) {
                let b1 = b.without(y).with(x);
                let b2 = b2p.without(x).with(y);
                if mb.is_basis(b1) && mb.is_basis(b2) {
                    out.push((b1, b2, b2p, x, y));
                }
            }
        }
    }
    out
}

pub fn quadratic_instances(ctx: &RemovalContext) -> Vec<QuadraticInstance> {
    let (b, mb) = (ctx.removed(), ctx.reduced());
    let mut out = Vec::new();
    for (b1, b2, b2p, _, _) in exchanges_into_b(ctx) {
        for w in b.difference(b2p) {
            for z in b2p.difference(b) {
                let b1p = b.without(w).with(z);
                let b2pp = b2p.without(z).with(w);
                if mb.is_basis(b1p) && mb.is_basis(b2pp) {
                    out.push([b1, b2, b2p, b1p, b2pp]);
                }
            }
        }
    }
    out
}

pub fn audit_quadratic(ctx: &RemovalContext, cfg: &AuditConfig) -> AuditSummary {
    let (total, exhaustive, inst) = choose(quadratic_instances(ctx), cfg, 0x51);
    summarize("quadratic", ctx, total, exhaustive, &inst, |&[b1, b2, b2p, b1p, b2pp]| {
        let seq = ctx.rewrite_quadratic(b1, b2, b2p, b1p, b2pp).map_err(|e| e.to_string())?;
        check_sequence(ctx.reduced(), &seq, &BasisTuple(vec![b1p, b2pp]), Some(ctx.removed()), Some(3))?;
        Ok(seq)
    })
}

/// `b1 b2 b3 -> b b2p b3 -> b1p b2p b3p` with all sides bases of `M_b`.
pub type SingleInstance = [Basis; 6];

pub fn single_b_instances(ctx: &RemovalContext) -> Vec<SingleInstance> {
    let (b, mb) = (ctx.removed(), ctx.reduced());
    let firsts = exchanges_into_b(ctx);
    let mut seconds = Vec::new();
    for &b3 in mb.bases() {
        for w in b.difference(b3) {
            for z in b3.difference(b) {
                let b1p = b.without(w).with(z);
                let b3p = b3.without(z).with(w);
                if mb.is_basis(b1p) && mb.is_basis(b3p) {
                    seconds.push((b3, b1p, b3p));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(firsts.len() * seconds.len());
    for &(b1, b2, b2p, _, _) in &firsts {
        for &(b3, b1p, b3p) in &seconds {
            out.push([b1, b2, b3, b2p, b1p, b3p]);
        }
    }
    out
}

pub fn audit_single_b(ctx: &RemovalContext, cfg: &AuditConfig) -> AuditSummary {
    let (total, exhaustive, inst) = choose(single_b_instances(ctx), cfg, 0x52);
    summarize("single-b", ctx, total, exhaustive, &inst, |&[b1, b2, b3, b2p, b1p, b3p]| {
        let seq = ctx.eliminate_single_b(b1, b2, b3, b2p, b1p, b2p, b3p).map_err(|e| e.to_string())?;
        check_sequence(ctx.reduced(), &seq, &BasisTuple(vec![b1p, b2p, b3p]), Some(ctx.removed()), Some(3))?;
        Ok(seq)
    })
}

/// Exchanges next to `b` whose triple has a `b`-free rearrangement.
pub fn type_b_instances(ctx: &RemovalContext) -> Vec<TypeBRelation> {
    let (b, m) = (ctx.removed(), ctx.parent());
    let others: Vec<Basis> = m.bases().iter().copied().filter(|&s| s != b).collect();
    let mut hypothesis: HashMap<(Basis, Basis), bool> = HashMap::new();
    let mut out = Vec::new();
    for &b1 in &others {
        for &b2 in &others {
            for x in b1.difference(b2) {
                for y in b2.difference(b1) {
                    let (b1p, b2p) = (b1.without(x).with(y), b2.without(y).with(x));
                    if b1p == b || b2p == b || !m.is_basis(b1p) || !m.is_basis(b2p) {
                        continue;
                    }
                    let key = (b1.min(b2), b1.max(b2));
                    let ok = *hypothesis
                        .entry(key)
                        .or_insert_with(|| matches!(ctx.type_b_hypothesis(b1, b2), Ok(Some(_))));
                    if ok {
                        out.push(TypeBRelation { b, b1, b2, b1p, b2p });
                    }
                }
            }
        }
    }
    out
}

/// Whether some step keeps `b` in place while exchanging two other members.
pub fn has_type_b_step(seq: &ExchangeSequence, b: Basis) -> bool {
    let mut cur = seq.start.0.clone();
    for step in &seq.steps {
        let before = cur.clone();
        if step.apply(&mut cur).is_err() {
            return false;
        }
        let touched_b = before[step.i] == b || before[step.j] == b;
        if before.contains(&b) && cur.contains(&b) && !touched_b {
            return true;
        }
    }
    false
}

pub fn audit_type_b(ctx: &RemovalContext, cfg: &AuditConfig) -> AuditSummary {
    let (total, exhaustive, inst) = choose(type_b_instances(ctx), cfg, 0x53);
    summarize("type-b", ctx, total, exhaustive, &inst, |rel| {
        let seq = ctx.eliminate_type_b(rel).map_err(|e| e.to_string())?;
        let end = BasisTuple(vec![rel.b, rel.b1p, rel.b2p]);
        check_sequence(ctx.parent(), &seq, &end, None, Some(3))?;
        if has_type_b_step(&seq, rel.b) {
            return Err("a step leaves b untouched".into());
        }
        Ok(seq)
    })
}

/// Seeded random relations of degree 2 or 3 in `M` with `b` on the left
/// and a `b`-free right-hand side.
pub fn push_down_relations(ctx: &RemovalContext, count: usize, seed: u64) -> Vec<Relation> {
    let (b, m) = (ctx.removed(), ctx.parent());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x54);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 50 {
        attempts += 1;
        let k = 2 + out.len() % 2;
        let mut lhs = vec![b];
        for _ in 1..k {
            lhs.push(m.bases()[rng.gen_range(0..m.num_bases())]);
        }
        let lhs = BasisTuple(lhs);
        let Ok(members) = fiber(m, &lhs.content(m.n()), k, ctx.cap()) else { continue };
        let free: Vec<&BasisTuple> = members.iter().filter(|t| !t.contains(b)).collect();
        if let Some(rhs) = free.choose(&mut rng) {
            out.push(Relation { lhs, rhs: (*rhs).clone() });
        }
    }
    out
}

pub fn audit_push_down(ctx: &RemovalContext, cfg: &AuditConfig) -> AuditSummary {
    let rels = push_down_relations(ctx, cfg.samples, cfg.seed);
    let total = rels.len();
    let deg = DegreeFunction::new(ctx.removed());
    summarize("push-down", ctx, total, false, &rels, |rel| {
        let seq = ctx.push_down_relation(rel).map_err(|e| e.to_string())?;
        check_sequence(ctx.parent(), &seq, &rel.rhs, None, None)?;
        let tuples = seq.tuples().map_err(|f| f.to_string())?;
        let mut last_count = deg.b_count(&tuples[0].0);
        for (k, label) in seq.case_trace.iter().enumerate() {
            let count = deg.b_count(&tuples[k + 1].0);
            match label.as_str() {
                "push-down/greedy" if count >= last_count => {
                    return Err(format!("greedy step {k} does not lower the count of b"));
                }
                "push-down/bridge" if count != 0 => {
                    return Err(format!("bridge step {k} visits b"));
                }
                _ => {}
            }
            last_count = count;
        }
        Ok(seq)
    })
}

/// A relation of `M_b` with the hint used to lift it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftInstance {
    pub relation: Relation,
    pub hint: ExchangeSequence,
    /// Whether the hint was forced through a tuple containing `b`.
    pub through_b: bool,
}

/// For every fiber of degree `k` in `M_b`, relations from its first member
/// to every other member, with a shortest hint in `M` and, where possible, a
/// second hint routed through a tuple containing `b`.
pub fn lift_instances(ctx: &RemovalContext, k: usize) -> Result<Vec<LiftInstance>, RewriteError> {
    let (b, m, mb) = (ctx.removed(), ctx.parent(), ctx.reduced());
    let report = crate::fiber::fiber_graph_connected(mb, k, crate::fiber::MoveMode::Strong, ctx.cap())?;
    let mut out = Vec::new();
    for rec in &report.records {
        let members = fiber(mb, &rec.content, k, ctx.cap())?;
        let Some((first, rest)) = members.split_first() else { continue };
        let via = fiber(m, &rec.content, k, ctx.cap())?.into_iter().find(|t| t.contains(b));
        for other in rest {
            let relation = Relation { lhs: first.clone(), rhs: other.clone() };
            let hint = find_exchange_path(m, first, other, ctx.cap())?;
            out.push(LiftInstance { relation: relation.clone(), hint, through_b: false });
            if let Some(w) = &via {
                let mut forced = find_exchange_path(m, first, w, ctx.cap())?;
                let back = find_exchange_path(m, &forced.end().expect("valid path"), other, ctx.cap())?;
                forced.steps.extend(back.steps);
                out.push(LiftInstance { relation, hint: forced, through_b: true });
            }
        }
    }
    Ok(out)
}

pub fn audit_lift(ctx: &RemovalContext, k: usize) -> Result<AuditSummary, RewriteError> {
    let inst = lift_instances(ctx, k)?;
    let total = inst.len();
    Ok(summarize("lift", ctx, total, true, &inst, |li| {
        let seq = ctx.lift_relation(&li.relation, &li.hint).map_err(|e| e.to_string())?;
        check_sequence(ctx.reduced(), &seq, &li.relation.rhs, Some(ctx.removed()), None)?;
        Ok(seq)
    }))
}
