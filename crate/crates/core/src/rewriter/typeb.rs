//! Exchanges `b b1 b2 -> b b1' b2'` that leave a copy of `b` untouched,
//! replaced by exchanges in `M` that each move `b` itself.

use serde::{Deserialize, Serialize};

use crate::fiber::{fiber, BasisTuple, ExchangeSequence};
use crate::matroid::Basis;

use super::chain::{only, swap, Chain};
use super::{oracle, precondition, RemovalContext, RewriteError};

/// The exchange `b1 b2 -> b1p b2p` taking place next to a copy of `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeBRelation {
    pub b: Basis,
    pub b1: Basis,
    pub b2: Basis,
    pub b1p: Basis,
    pub b2p: Basis,
}

impl TypeBRelation {
    /// `(x, y)` with `b1p = b1 - x + y` and `b2p = b2 - y + x`.
    pub fn exchange(&self) -> Option<(usize, usize)> {
        let x = only(self.b1.difference(self.b1p))?;
        let y = only(self.b1p.difference(self.b1))?;
        (self.b2.contains(y) && !self.b2.contains(x) && swap(self.b2, y, x) == self.b2p).then_some((x, y))
    }
}

/// Whether some step leaves a copy of `b` in place while exchanging between
/// two other members.
pub(crate) fn has_type_b_step(chain: &Chain, b: Basis) -> bool {
    chain.tuples.windows(2).any(|w| {
        let (before, after) = (&w[0], &w[1]);
        if !before.contains(&b) || !after.contains(&b) {
            return false;
        }
        let mut removed = before.clone();
        for s in after {
            if let Some(p) = removed.iter().position(|t| t == s) {
                removed.remove(p);
            }
        }
        !removed.contains(&b)
    })
}

struct Oriented {
    c1: Basis,
    c2: Basis,
    c1p: Basis,
    c2p: Basis,
    x: usize,
    y: usize,
}

impl Oriented {
    fn flipped(&self) -> Oriented {
        Oriented { c1: self.c2, c2: self.c1, c1p: self.c2p, c2p: self.c1p, x: self.y, y: self.x }
    }
}

impl RemovalContext {
    /// A b-free triple with the same content as `b b1 b2`, if one exists.
    pub fn type_b_hypothesis(&self, b1: Basis, b2: Basis) -> Result<Option<BasisTuple>, RewriteError> {
        let t = BasisTuple(vec![self.b, b1, b2]);
        let members = fiber(&self.m, &t.content(self.m.n()), 3, self.cap)?;
        Ok(members.into_iter().find(|u| !u.contains(self.b)))
    }

    /// A sequence in `M` from `(b, b1, b2)` to `(b, b1p, b2p)` of at most
    /// three steps, none of which leaves `b` untouched.
    pub fn eliminate_type_b(&self, rel: &TypeBRelation) -> Result<ExchangeSequence, RewriteError> {
        if rel.b != self.b {
            return Err(precondition(format!("relation is stated for {} rather than {}", rel.b, self.b)));
        }
        if self.type_b_hypothesis(rel.b1, rel.b2)?.is_none() {
            return Err(precondition(format!(
                "{} {} {} has the same content as no triple avoiding {}",
                rel.b, rel.b1, rel.b2, rel.b
            )));
        }
        let chain = self.type_b_chain(rel.b1, rel.b2, rel.b1p, rel.b2p)?;
        chain.to_sequence(&BasisTuple(vec![rel.b, rel.b1, rel.b2]))
    }

    pub(crate) fn type_b_chain(&self, b1: Basis, b2: Basis, b1p: Basis, b2p: Basis) -> Result<Chain, RewriteError> {
        let (b, m) = (self.b, &self.m);
        for s in [b1, b2, b1p, b2p] {
            if s == b {
                return Err(precondition(format!("{b} appears among the exchanged members")));
            }
            m.require_basis(s)?;
        }
        let rel = TypeBRelation { b, b1, b2, b1p, b2p };
        let (x, y) = rel
            .exchange()
            .ok_or_else(|| precondition(format!("{b1} {b2} -> {b1p} {b2p} is not a symmetric exchange")))?;
        let o = Oriented { c1: b1, c2: b2, c1p: b1p, c2p: b2p, x, y };
        let start = vec![b, b1, b2];
        let end = vec![b, b1p, b2p];

        let chain = match (b.contains(x), b.contains(y)) {
            (false, false) => match self.case_one(&o)? {
                Some(c) => c,
                None => self.case_one(&o.flipped())?.ok_or_else(excluded)?,
            },
            (true, false) => Chain::from_tuples(
                vec![start, vec![swap(b, x, y), b1, b2p], end],
                "type-b/case-2",
            ),
            (false, true) => Chain::from_tuples(
                vec![start, vec![swap(b, y, x), b1p, b2], end],
                "type-b/case-3",
            ),
            (true, true) => match self.case_four(&o)? {
                Some(c) => c,
                None => self.case_four(&o.flipped())?.ok_or_else(excluded)?,
            },
        };
        chain.validate(m, None)?;
        if has_type_b_step(&chain, b) {
            return Err(oracle("type-b rewrite still leaves b untouched in some step"));
        }
        if chain.steps() > 3 {
            return Err(oracle(format!("type-b rewrite produced {} steps", chain.steps())));
        }
        Ok(chain)
    }

    /// Both exchanged elements outside `b`. `None` when this orientation
    /// needs `c1` to differ from `b` in two elements and it does not.
    fn case_one(&self, o: &Oriented) -> Result<Option<Chain>, RewriteError> {
        let (b, m) = (self.b, &self.m);
        let Some(p) = b.difference(o.c1.with(o.y)).min_elem() else {
            return Err(oracle(format!("no element of {b} avoids {} and {}", o.c1, o.y)));
        };
        let start = vec![b, o.c1, o.c2];
        let end = vec![b, o.c1p, o.c2p];
        if m.fundamental_circuit(o.c1, p)? == m.fundamental_circuit(o.c1p, p)? {
            let q = m
                .symmetric_partner(b, o.c1, p)
                .ok_or_else(|| oracle(format!("no exchange partner for {p} from {b} into {}", o.c1)))?;
            let bq = swap(b, p, q);
            return Ok(Some(Chain::from_tuples(
                vec![start, vec![bq, swap(o.c1, q, p), o.c2], vec![bq, swap(o.c1p, q, p), o.c2p], end],
                "type-b/case-1.1",
            )));
        }
        if o.c1.difference(b).len() < 2 {
            return Ok(None);
        }
        Ok(Some(Chain::from_tuples(
            vec![
                start,
                vec![swap(b, p, o.x), swap(o.c1, o.x, p), o.c2],
                vec![swap(b, p, o.y), swap(o.c1p, o.y, p), o.c2p],
                end,
            ],
            "type-b/case-1.2",
        )))
    }

    /// Both exchanged elements inside `b`.
    fn case_four(&self, o: &Oriented) -> Result<Option<Chain>, RewriteError> {
        let (b, m) = (self.b, &self.m);
        if o.c1.difference(b).len() < 2 {
            return Ok(None);
        }
        let p = m
            .symmetric_partner(b, o.c1, o.y)
            .ok_or_else(|| oracle(format!("no exchange partner for {} from {b} into {}", o.y, o.c1)))?;
        let c1y = swap(o.c1, p, o.y);
        Ok(Some(Chain::from_tuples(
            vec![
                vec![b, o.c1, o.c2],
                vec![swap(b, o.y, p), c1y, o.c2],
                vec![swap(b, o.x, p), c1y, o.c2p],
                vec![b, o.c1p, o.c2p],
            ],
            "type-b/case-4",
        )))
    }
}

fn excluded() -> RewriteError {
    precondition("both exchanged members differ from b in exactly one element")
}
