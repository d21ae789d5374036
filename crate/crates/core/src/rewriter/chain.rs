//! Chains of multisets used while rewriting; positions are assigned only
//! when a chain is turned into an [`ExchangeSequence`].

use crate::fiber::{positionalize, step_towards, BasisTuple, ExchangeSequence, ExchangeStep};
use crate::matroid::{Basis, Matroid};

use super::{oracle, RewriteError};

/// Sorted tuples, consecutive ones a single exchange apart. `labels[i]`
/// names the construction behind the step `tuples[i] -> tuples[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Chain {
    pub tuples: Vec<Vec<Basis>>,
    pub labels: Vec<String>,
}

pub(crate) fn sorted(mut t: Vec<Basis>) -> Vec<Basis> {
    t.sort_unstable();
    t
}

impl Chain {
    pub fn single(t: Vec<Basis>) -> Self {
        Chain { tuples: vec![sorted(t)], labels: Vec::new() }
    }

    /// Builds a chain from listed tuples, all steps carrying `label`;
    /// repeated consecutive tuples collapse.
    pub fn from_tuples(list: Vec<Vec<Basis>>, label: &str) -> Self {
        let mut it = list.into_iter();
        let mut chain = Chain::single(it.next().expect("chain needs a first tuple"));
        for t in it {
            chain.push(t, label);
        }
        chain
    }

    pub fn from_sequence(seq: &ExchangeSequence, label: &str) -> Result<Self, RewriteError> {
        let tuples = seq.tuples().map_err(RewriteError::InvalidHint)?;
        Ok(Chain::from_tuples(tuples.into_iter().map(|t| t.0).collect(), label))
    }

    pub fn first(&self) -> &[Basis] {
        &self.tuples[0]
    }

    pub fn last(&self) -> &[Basis] {
        self.tuples.last().expect("chain is never empty")
    }

    pub fn steps(&self) -> usize {
        self.labels.len()
    }

    pub fn push(&mut self, t: Vec<Basis>, label: &str) {
        let t = sorted(t);
        if t != *self.last() {
            self.tuples.push(t);
            self.labels.push(label.to_string());
        }
    }

    /// Concatenates `other`, whose first tuple must equal our last.
    pub fn append(&mut self, other: Chain) {
        debug_assert_eq!(other.first(), self.last());
        let Chain { tuples, labels } = other;
        for (t, l) in tuples.into_iter().skip(1).zip(labels) {
            self.push(t, &l);
        }
    }

    /// Adds the fixed members `rest` to every tuple.
    pub fn embed(&self, rest: &[Basis]) -> Chain {
        Chain {
            tuples: self
                .tuples
                .iter()
                .map(|t| sorted(t.iter().chain(rest).copied().collect()))
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn reversed(&self) -> Chain {
        let mut tuples = self.tuples.clone();
        tuples.reverse();
        let mut labels = self.labels.clone();
        labels.reverse();
        Chain { tuples, labels }
    }

    /// Replaces `tuples[from..=to]` by `piece`, whose endpoints must match.
    pub fn splice(&mut self, from: usize, to: usize, piece: Chain) {
        debug_assert_eq!(piece.first(), &self.tuples[from][..]);
        debug_assert_eq!(piece.last(), &self.tuples[to][..]);
        let mut tuples: Vec<Vec<Basis>> = self.tuples[..from].to_vec();
        let mut labels: Vec<String> = self.labels[..from].to_vec();
        tuples.extend(piece.tuples);
        labels.extend(piece.labels);
        tuples.extend_from_slice(&self.tuples[to + 1..]);
        labels.extend_from_slice(&self.labels[to..]);
        let mut it = tuples.into_iter();
        let mut rebuilt = Chain::single(it.next().expect("non-empty"));
        for (t, l) in it.zip(labels) {
            rebuilt.push(t, &l);
        }
        *self = rebuilt;
    }

    /// Every member a basis of `m`, every step one symmetric exchange and,
    /// when `avoid` is given, no tuple containing it.
    pub fn validate(&self, m: &Matroid, avoid: Option<Basis>) -> Result<(), RewriteError> {
        for (k, t) in self.tuples.iter().enumerate() {
            if let Some(bad) = t.iter().find(|&&s| !m.is_basis(s)) {
                return Err(oracle(format!("tuple {k} of the constructed chain has non-basis member {bad}")));
            }
            if let Some(b) = avoid {
                if t.contains(&b) {
                    return Err(oracle(format!("tuple {k} of the constructed chain contains {b}")));
                }
            }
        }
        for k in 1..self.tuples.len() {
            match step_towards(&self.tuples[k - 1], &self.tuples[k]) {
                Ok(Some(_)) => {}
                _ => {
                    return Err(oracle(format!(
                        "tuples {} and {k} of the constructed chain are not one exchange apart",
                        k - 1
                    )))
                }
            }
        }
        Ok(())
    }

    /// Positional form starting from `start`, which must be a reordering of
    /// the first tuple.
    pub fn to_sequence(&self, start: &BasisTuple) -> Result<ExchangeSequence, RewriteError> {
        if start.canonical().0 != self.first() {
            return Err(oracle("chain does not start at the requested tuple"));
        }
        let steps = positionalize(start, &self.tuples.iter().map(|t| BasisTuple(t.clone())).collect::<Vec<_>>())
            .map_err(|k| oracle(format!("chain tuple {k} is not one exchange from its predecessor")))?;
        debug_assert_eq!(steps.len(), self.labels.len());
        Ok(ExchangeSequence { start: start.clone(), steps, case_trace: self.labels.clone() })
    }
}

/// Members and exchanged elements of the step `from -> to`, in `from`'s
/// positions: `(i, j, step, after)` where `after` is `from` with the step
/// applied.
pub(crate) fn locate_step(from: &[Basis], to: &[Basis]) -> Result<(ExchangeStep, Vec<Basis>), RewriteError> {
    let step = step_towards(from, to)
        .ok()
        .flatten()
        .ok_or_else(|| oracle("consecutive tuples are not one exchange apart"))?;
    let mut after = from.to_vec();
    step.apply(&mut after).map_err(oracle)?;
    Ok((step, after))
}

/// Members of `t` outside the positions `skip`.
pub(crate) fn rest_of(t: &[Basis], skip: &[usize]) -> Vec<Basis> {
    t.iter()
        .enumerate()
        .filter(|(p, _)| !skip.contains(p))
        .map(|(_, &s)| s)
        .collect()
}

/// Removes one copy of `b`.
pub(crate) fn strip_one(t: &[Basis], b: Basis) -> Vec<Basis> {
    let mut v = t.to_vec();
    if let Some(p) = v.iter().position(|&s| s == b) {
        v.remove(p);
    }
    v
}

/// `s` with `out` replaced by `into`; unchanged when the two coincide.
pub(crate) fn swap(s: Basis, out: usize, into: usize) -> Basis {
    if out == into {
        s
    } else {
        s.without(out).with(into)
    }
}

/// The single element of `s`, if `s` has exactly one.
pub(crate) fn only(s: crate::set::ElemSet) -> Option<usize> {
    if s.len() == 1 {
        s.min_elem()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::ElemSet;

    fn set(e: &[usize]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    #[test]
    fn collapse_and_splice() {
        let a = vec![set(&[0, 1]), set(&[2, 3])];
        let b = vec![set(&[0, 2]), set(&[1, 3])];
        let c = vec![set(&[0, 3]), set(&[1, 2])];
        let mut ch = Chain::from_tuples(vec![a.clone(), a.clone(), b.clone(), c.clone()], "t");
        assert_eq!(ch.steps(), 2);
        ch.splice(0, 1, Chain::from_tuples(vec![a.clone(), c.clone(), b.clone()], "s"));
        assert_eq!(ch.tuples.len(), 4);
        assert_eq!(ch.labels, vec!["s", "s", "t"]);
        let u = Matroid::uniform(4, 2).unwrap();
        ch.validate(&u, None).unwrap();
        let seq = ch.to_sequence(&BasisTuple(a)).unwrap();
        assert_eq!(seq.len(), 3);
    }
}
