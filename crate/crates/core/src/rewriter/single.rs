//! A single visit to `b` inside a triple, `b1 b2 b3 -> b b2' b3 -> b1' b2' b3'`,
//! replaced by exchanges among bases of `M_b`.

use crate::fiber::{BasisTuple, ExchangeSequence};
use crate::matroid::Basis;

use super::chain::{only, swap, Chain};
use super::{oracle, precondition, RemovalContext, RewriteError};

impl RemovalContext {
    /// A sequence in `M_b` from `(b1, b2, b3)` to `(b1p, b2pp, b3p)` given the
    /// two exchanges `b1 b2 b3 -> b b2p b3 -> b1p b2pp b3p` in `M`.
    ///
    /// When the second exchange pairs `b` with `b2p` again, the third member
    /// is a bystander and the quadratic rewrite applies.
    #[allow(clippy::too_many_arguments)]
    pub fn eliminate_single_b(
        &self,
        b1: Basis,
        b2: Basis,
        b3: Basis,
        b2p: Basis,
        b1p: Basis,
        b2pp: Basis,
        b3p: Basis,
    ) -> Result<ExchangeSequence, RewriteError> {
        let chain = self.single_chain(b1, b2, b3, b2p, b1p, b2pp, b3p)?;
        chain.to_sequence(&BasisTuple(vec![b1, b2, b3]))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn single_chain(
        &self,
        b1: Basis,
        b2: Basis,
        b3: Basis,
        b2p: Basis,
        b1p: Basis,
        b2pp: Basis,
        b3p: Basis,
    ) -> Result<Chain, RewriteError> {
        let (b, mb) = (self.b, &self.mb);
        for s in [b1, b2, b3, b2p, b1p, b2pp, b3p] {
            if !mb.is_basis(s) {
                return Err(precondition(format!("{s} is not a basis of the reduced matroid")));
            }
        }
        if b3p == b3 {
            return Ok(self.quadratic_chain(b1, b2, b2p, b1p, b2pp)?.embed(&[b3]));
        }
        if b2pp != b2p {
            return Err(precondition("the second exchange must pair b with the third member"));
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
        if !b3.contains(z) || b3.contains(w) || swap(b3, z, w) != b3p {
            return Err(precondition(format!("{b} {b3} -> {b1p} {b3p} is not a symmetric exchange")));
        }

        let partner = |s1: Basis, s2: Basis, e: usize| {
            mb.symmetric_partner(s1, s2, e)
                .ok_or_else(|| oracle(format!("no exchange partner for {e} from {s1} into {s2}")))
        };
        let start = vec![b1, b2, b3];
        let end = vec![b1p, b2p, b3p];
        let chain = if y != w {
            if x != z {
                let p = partner(b1, b3, w)?;
                if p != y {
                    let b3w = swap(b3, p, w);
                    Chain::from_tuples(
                        vec![start, vec![swap(b1, w, p), b2, b3w], vec![swap(b, w, p), b2p, b3w], end],
                        "single-b/case-1.1",
                    )
                } else {
                    let q = partner(b2p, b1p, x)?;
                    if q == z {
                        let bx = swap(b, w, x);
                        Chain::from_tuples(
                            vec![start, vec![bx, b2, swap(b3, y, w)], vec![bx, swap(b2p, x, z), b3p], end],
                            "single-b/case-1.1-q-is-z",
                        )
                    } else {
                        let b2q = swap(b2p, x, q);
                        Chain::from_tuples(
                            vec![end, vec![swap(b1p, q, x), b2q, b3p], vec![swap(b, q, x), b2q, b3], start],
                            "single-b/case-1.1-q-in-b",
                        )
                        .reversed()
                    }
                }
            } else {
                let r = partner(b1p, b2p, y)?;
                if r == w {
                    Chain::from_tuples(
                        vec![start, vec![b1, swap(b2, w, x), b3p], end],
                        "single-b/case-1.2-r-is-w",
                    )
                } else {
                    let b2r = swap(b2p, r, y);
                    Chain::from_tuples(
                        vec![start, vec![swap(b, y, r), b2r, b3], vec![swap(b1p, y, r), b2r, b3p], end],
                        "single-b/case-1.2",
                    )
                }
            }
        } else if x == z {
            Chain::from_tuples(vec![start, end], "single-b/case-2")
        } else {
            let q = partner(b3, b1, z)?;
            if q == x {
                Chain::from_tuples(vec![start, vec![b1p, b2, swap(b3, z, x)], end], "single-b/case-2.1")
            } else {
                let b3q = swap(b3, z, q);
                Chain::from_tuples(
                    vec![start, vec![swap(b1, q, z), b2, b3q], vec![swap(b, q, z), b2p, b3q], end],
                    "single-b/case-2.2",
                )
            }
        };
        chain.validate(mb, Some(b))?;
        if chain.steps() > 3 {
            return Err(oracle(format!("single-b rewrite produced {} steps", chain.steps())));
        }
        Ok(chain)
    }
}
