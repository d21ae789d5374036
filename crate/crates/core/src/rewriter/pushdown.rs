//! Pushing a relation of `M` that involves `b` down to exchanges in `M`
//! whose second half lives in `M_b`.

use serde::{Deserialize, Serialize};

use crate::fiber::{find_exchange_path, is_relation, BasisTuple, ExchangeSequence, FiberError, Relation};
use crate::matroid::Basis;

use super::chain::{sorted, strip_one, swap, Chain};
use super::{oracle, precondition, RemovalContext, RewriteError};

/// `deg(s) = |s \ b|`, extended additively to tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeFunction {
    pub b: Basis,
}

impl DegreeFunction {
    pub fn new(b: Basis) -> Self {
        DegreeFunction { b }
    }

    pub fn degree(&self, s: Basis) -> usize {
        s.difference(self.b).len()
    }

    pub fn tuple_degree(&self, t: &[Basis]) -> usize {
        t.iter().map(|&s| self.degree(s)).sum()
    }

    /// Copies of `b` in `t`, i.e. members of degree zero.
    pub fn b_count(&self, t: &[Basis]) -> usize {
        t.iter().filter(|&&s| s == self.b).count()
    }
}

impl RemovalContext {
    /// A sequence in `M` between the sides of `rel`: exchanges that remove the
    /// copies of `b`, then a path among bases of `M_b`.
    pub fn push_down_relation(&self, rel: &Relation) -> Result<ExchangeSequence, RewriteError> {
        let (b, m) = (self.b, &self.m);
        if !is_relation(m, &rel.lhs, &rel.rhs)? {
            return Err(precondition("sides have different content"));
        }
        let deg = DegreeFunction::new(b);
        let common = deg.b_count(&rel.lhs.0).min(deg.b_count(&rel.rhs.0));
        let (mut lhs, mut rhs) = (rel.lhs.0.clone(), rel.rhs.0.clone());
        for _ in 0..common {
            lhs = strip_one(&lhs, b);
            rhs = strip_one(&rhs, b);
        }
        let swapped = deg.b_count(&rhs) > 0;
        let (from, to) = if swapped { (rhs, lhs) } else { (lhs, rhs) };

        let mut cur = from;
        let mut chain = Chain::single(cur.clone());
        while let Some(pb) = cur.iter().position(|&s| s == b) {
            let before = deg.b_count(&cur);
            let Some(pm) = cur.iter().position(|&s| deg.degree(s) >= 2) else {
                return Err(oracle("no member differs from b in two elements"));
            };
            let x = b.difference(cur[pm]).min_elem().expect("member differs from b");
            let y = m
                .symmetric_partner(b, cur[pm], x)
                .ok_or(RewriteError::NoExchange { b1: b, b2: cur[pm], x })?;
            cur[pb] = swap(b, x, y);
            cur[pm] = swap(cur[pm], y, x);
            if deg.b_count(&cur) >= before {
                return Err(oracle("greedy exchange did not lower the number of copies of b"));
            }
            chain.push(cur.clone(), "push-down/greedy");
        }

        let bridge = find_exchange_path(&self.mb, &BasisTuple(cur.clone()), &BasisTuple(to.clone()), self.cap)
            .map_err(|e| match e {
                FiberError::Disconnected { from, to } => RewriteError::OracleFailure {
                    reason: "the reduced matroid's fiber is disconnected".into(),
                    relation: Some(Relation { lhs: from, rhs: to }),
                },
                other => RewriteError::Fiber(other),
            })?;
        for t in bridge.tuples().map_err(|f| oracle(f.to_string()))?.into_iter().skip(1) {
            chain.push(t.0, "push-down/bridge");
        }
        if chain.last() != sorted(to).as_slice() {
            return Err(oracle("bridge does not reach the other side"));
        }
        let chain = if swapped { chain.reversed() } else { chain };
        let chain = chain.embed(&vec![b; common]);
        chain.validate(m, None)?;
        chain.to_sequence(&rel.lhs)
    }
}
