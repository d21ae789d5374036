//! Lifting a relation of `M_b` from an exchange sequence in `M`.
//!
//! Runs of consecutive tuples containing `b` are handled by induction on the
//! degree: strip one copy of `b`, lift the shorter run, put `b` back and
//! rewrite each exchange that leaves `b` untouched. What remains are isolated
//! visits to `b`, each removed together with its two neighbouring steps.

use crate::fiber::{is_relation, verify_sequence, ExchangeSequence, Relation};
use crate::matroid::Basis;

use super::chain::{locate_step, rest_of, sorted, strip_one, Chain};
use super::{oracle, precondition, RemovalContext, RewriteError};

impl RemovalContext {
    /// A sequence in `M_b` between the two sides of `rel`, built from `hint`,
    /// a sequence in `M` between the same tuples.
    pub fn lift_relation(&self, rel: &Relation, hint: &ExchangeSequence) -> Result<ExchangeSequence, RewriteError> {
        let b = self.b;
        if rel.lhs.contains(b) || rel.rhs.contains(b) {
            return Err(precondition(format!("relation sides must avoid {b}")));
        }
        if !is_relation(&self.mb, &rel.lhs, &rel.rhs)? {
            return Err(precondition("sides have different content"));
        }
        if !hint.start.same_multiset(&rel.lhs) {
            return Err(precondition("hint does not start at the left-hand side"));
        }
        verify_sequence(&self.m, hint, &rel.rhs).map_err(RewriteError::InvalidHint)?;
        let chain = Chain::from_sequence(hint, "hint")?;
        let lifted = self.lift_chain(chain).map_err(|e| with_relation(e, rel))?;
        lifted.validate(&self.mb, Some(b))?;
        if lifted.last() != rel.rhs.canonical().0 {
            return Err(oracle("lifted chain does not end at the right-hand side"));
        }
        lifted.to_sequence(&rel.lhs)
    }

    /// Rewrites a chain in `M` with `b`-free endpoints into one in `M_b`.
    pub(crate) fn lift_chain(&self, mut chain: Chain) -> Result<Chain, RewriteError> {
        let b = self.b;
        loop {
            self.resolve_isolated(&mut chain)?;
            let Some(j0) = chain.tuples.iter().position(|t| t.contains(&b)) else {
                return Ok(chain);
            };
            let mut j1 = j0;
            while j1 + 1 < chain.tuples.len() && chain.tuples[j1 + 1].contains(&b) {
                j1 += 1;
            }
            if j0 == 0 || j1 + 1 == chain.tuples.len() {
                return Err(precondition("chain endpoints must avoid b"));
            }
            if j0 == j1 {
                return Err(oracle("an isolated visit to b survived rewriting"));
            }
            let block = self.lift_block(&chain, j0, j1)?;
            chain.splice(j0, j1, block);
        }
    }

    /// The run `tuples[j0..=j1]`, each containing `b`, replaced by a chain
    /// between the same endpoints in which `b` only appears in isolation.
    fn lift_block(&self, chain: &Chain, j0: usize, j1: usize) -> Result<Chain, RewriteError> {
        let b = self.b;
        for j in [j0, j1] {
            if chain.tuples[j].iter().filter(|&&s| s == b).count() != 1 {
                return Err(oracle(format!("run endpoint {j} holds b more than once")));
            }
        }
        let mut stripped = Chain::single(strip_one(&chain.tuples[j0], b));
        for j in j0 + 1..=j1 {
            stripped.push(strip_one(&chain.tuples[j], b), &chain.labels[j - 1]);
        }
        let lifted = self.lift_chain(stripped)?;

        let mut block = Chain::single(with_b(lifted.first(), b));
        for w in lifted.tuples.windows(2) {
            let (step, after) = locate_step(&w[0], &w[1])?;
            let rest = rest_of(&w[0], &[step.i, step.j]);
            let piece = self.type_b_chain(w[0][step.i], w[0][step.j], after[step.i], after[step.j])?;
            block.append(piece.embed(&rest));
        }
        if block.tuples.windows(2).any(|w| w[0].contains(&b) && w[1].contains(&b)) {
            return Err(oracle("rewritten run still visits b in consecutive tuples"));
        }
        Ok(block)
    }

    /// Replaces every `P -> Q -> S` with `b` in `Q` only by a chain in `M_b`.
    fn resolve_isolated(&self, chain: &mut Chain) -> Result<(), RewriteError> {
        let b = self.b;
        let mut q = 1;
        while q + 1 < chain.tuples.len() {
            let isolated = chain.tuples[q].contains(&b)
                && !chain.tuples[q - 1].contains(&b)
                && !chain.tuples[q + 1].contains(&b);
            if !isolated {
                q += 1;
                continue;
            }
            let (p, s) = (&chain.tuples[q - 1], &chain.tuples[q + 1]);
            let piece = if p == s {
                Chain::single(p.clone())
            } else {
                self.detour(p, s, &chain.tuples[q])?
            };
            chain.splice(q - 1, q + 1, piece);
            q = q.saturating_sub(1).max(1);
        }
        Ok(())
    }

    /// Chain in `M_b` from `p` to `s` replacing the two steps through `mid`.
    fn detour(&self, p: &[Basis], s: &[Basis], mid: &[Basis]) -> Result<Chain, RewriteError> {
        let b = self.b;
        let (first, q) = locate_step(p, mid)?;
        let pb = if q[first.i] == b { first.i } else { first.j };
        let pv = if pb == first.i { first.j } else { first.i };
        if q[pb] != b {
            return Err(oracle("step into b does not produce b"));
        }
        let (second, after) = locate_step(&q, s)?;
        let pm = if second.i == pb {
            second.j
        } else if second.j == pb {
            second.i
        } else {
            return Err(oracle("step out of b leaves b in place"));
        };
        if pm == pv || q[pm] == q[pv] {
            // a duplicate of the first partner counts as the same member
            let rest = rest_of(p, &[pb, pv]);
            Ok(self.quadratic_chain(p[pb], p[pv], q[pv], after[pb], after[pm])?.embed(&rest))
        } else {
            let rest = rest_of(p, &[pb, pv, pm]);
            Ok(self
                .single_chain(p[pb], p[pv], p[pm], q[pv], after[pb], after[pv], after[pm])?
                .embed(&rest))
        }
    }
}

fn with_b(t: &[Basis], b: Basis) -> Vec<Basis> {
    let mut v = t.to_vec();
    v.push(b);
    sorted(v)
}

fn with_relation(e: RewriteError, rel: &Relation) -> RewriteError {
    match e {
        RewriteError::OracleFailure { reason, relation: None } => {
            RewriteError::OracleFailure { reason, relation: Some(rel.clone()) }
        }
        other => other,
    }
}
