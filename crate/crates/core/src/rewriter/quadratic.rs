//! Two consecutive exchanges through `b`, `b1 b2 -> b b2' -> b1' b2''`,
//! replaced by exchanges that never visit `b`.

use crate::fiber::{BasisTuple, ExchangeSequence};
use crate::matroid::Basis;

use super::chain::{only, swap, Chain};
use super::{oracle, precondition, RemovalContext, RewriteError};

impl RemovalContext {
    /// A sequence in `M_b` from `(b1, b2)` to `(b1p, b2pp)` of at most three
    /// steps, given the double exchange `b1 b2 -> b b2p -> b1p b2pp` in `M`.
    pub fn rewrite_quadratic(
        &self,
        b1: Basis,
        b2: Basis,
        b2p: Basis,
        b1p: Basis,
        b2pp: Basis,
    ) -> Result<ExchangeSequence, RewriteError> {
        let chain = self.quadratic_chain(b1, b2, b2p, b1p, b2pp)?;
        chain.to_sequence(&BasisTuple(vec![b1, b2]))
    }

    pub(crate) fn quadratic_chain(
        &self,
        b1: Basis,
        b2: Basis,
        b2p: Basis,
        b1p: Basis,
        b2pp: Basis,
    ) -> Result<Chain, RewriteError> {
        let (b, m, mb) = (self.b, &self.m, &self.mb);
        for s in [b1, b2, b2p, b1p, b2pp] {
            if !mb.is_basis(s) {
                return Err(precondition(format!("{s} is not a basis of the reduced matroid")));
            }
        }
        let (Some(x), Some(y)) = (only(b1.difference(b)), only(b.difference(b1))) else {
            return Err(precondition(format!("{b1} is not one exchange away from {b}")));
        };
        if !b2.contains(y) || b2.contains(x) || swap(b2, y, x) != b2p {
            return Err(precondition(format!("{b1} {b2} -> {b} {b2p} is not a symmetric exchange")));
        }
        let (Some(z), Some(w)) = (only(b1p.difference(b)), only(b.difference(b1p))) else {
            return Err(precondition(format!("{b1p} is not one exchange away from {b}")));
        };
        if !b2p.contains(z) || b2p.contains(w) || swap(b2p, z, w) != b2pp {
            return Err(precondition(format!("{b} {b2p} -> {b1p} {b2pp} is not a symmetric exchange")));
        }

        let start = vec![b1, b2];
        let end = vec![b1p, b2pp];
        let chain = if x == z || y == w {
            Chain::from_tuples(vec![start, end], "quadratic/direct")
        } else if m.fundamental_circuit(b2p, y)? == m.fundamental_circuit(b2pp, y)? {
            let p = mb
                .symmetric_partner(b1p, b2pp, y)
                .ok_or_else(|| oracle(format!("no exchange partner for {y} from {b1p} into {b2pp}")))?;
            if swap(b2pp, p, y) == b {
                Chain::from_tuples(vec![start, end], "quadratic/case-1")
            } else {
                Chain::from_tuples(
                    vec![
                        start,
                        vec![swap(b1, x, p), swap(b2, p, x)],
                        vec![swap(b1p, y, p), swap(b2pp, p, y)],
                        end,
                    ],
                    "quadratic/case-1",
                )
            }
        } else {
            Chain::from_tuples(
                vec![start, vec![swap(b, y, z), swap(b2p, z, y)], end],
                "quadratic/case-2",
            )
        };
        chain.validate(mb, Some(b))?;
        if chain.steps() > 3 {
            return Err(oracle(format!("quadratic rewrite produced {} steps", chain.steps())));
        }
        Ok(chain)
    }
}
