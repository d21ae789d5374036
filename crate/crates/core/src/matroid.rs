//! Matroids given by their bases.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::{k_subsets, ElemSet, MAX_ELEMENTS};

/// A basis is an index set of matroid-rank cardinality.
pub type Basis = ElemSet;

/// A minimal dependent set.
pub type Circuit = ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ground set of size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(usize),
    #[error("the basis list is empty")]
    EmptyBases,
    #[error("element {element} of {set} lies outside the ground set of size {n}")]
    ElementOutOfRange { set: ElemSet, element: usize, n: usize },
    #[error("{set} has cardinality {found}, expected {expected}")]
    UnequalCardinality { set: ElemSet, expected: usize, found: usize },
    #[error("exchange axiom fails: no y in {b2} \\ {b1} makes ({b1} - {x}) + y a basis")]
    ExchangeAxiomFails { b1: Basis, b2: Basis, x: usize },
    #[error("{0} is not a basis")]
    NotABasis(ElemSet),
    #[error("element {element} already lies in basis {basis}")]
    ElementInBasis { basis: Basis, element: usize },
    #[error("element {0} is a loop")]
    LoopElement(usize),
    #[error("invalid rank {r} for a ground set of size {n}")]
    InvalidRank { n: usize, r: usize },
    #[error("matrix has rank {rank}, less than its {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
}

/// A matroid on `{0, .., n-1}` described by its set of bases.
///
/// Values are immutable after validation; the basis list is deduplicated and
/// sorted by integer encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Basis>,
}

/// Wire form `{"n": .., "bases": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidData {
    pub n: usize,
    pub bases: Vec<ElemSet>,
}

impl Matroid {
    /// Validates a candidate basis family against the basis exchange axiom.
    pub fn validate_bases<I>(n: usize, candidates: I) -> Result<Matroid, MatroidError>
    where
        I: IntoIterator<Item = ElemSet>,
    {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        let mut bases: Vec<Basis> = candidates.into_iter().collect();
        let first = *bases.first().ok_or(MatroidError::EmptyBases)?;
        let ground = ElemSet::full(n);
        let rank = first.len();
        for &set in &bases {
            if let Some(element) = set.difference(ground).min_elem() {
                return Err(MatroidError::ElementOutOfRange { set, element, n });
            }
            if set.len() != rank {
                return Err(MatroidError::UnequalCardinality {
                    set,
                    expected: rank,
                    found: set.len(),
                });
            }
        }
        bases.sort_unstable();
        bases.dedup();
        let m = Matroid { n, rank, bases };
        m.check_exchange_axiom()?;
        Ok(m)
    }

    /// Trusted constructor for families already known to be matroids.
    pub(crate) fn from_sorted_unchecked(n: usize, rank: usize, bases: Vec<Basis>) -> Matroid {
        debug_assert!(bases.windows(2).all(|w| w[0] < w[1]));
        Matroid { n, rank, bases }
    }

    fn check_exchange_axiom(&self) -> Result<(), MatroidError> {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for x in b1.difference(b2) {
                    let ok = b2
                        .difference(b1)
                        .iter()
                        .any(|y| self.is_basis(b1.exchange(x, y)));
                    if !ok {
                        return Err(MatroidError::ExchangeAxiomFails { b1, b2, x });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn uniform(n: usize, r: usize) -> Result<Matroid, MatroidError> {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        if r > n {
            return Err(MatroidError::InvalidRank { n, r });
        }
        let mut bases: Vec<Basis> = k_subsets(n, r).collect();
        bases.sort_unstable();
        Ok(Matroid::from_sorted_unchecked(n, r, bases))
    }

    /// Bases are the complements of the bases of `self`.
    pub fn dual(&self) -> Matroid {
        let ground = ElemSet::full(self.n);
        let mut bases: Vec<Basis> = self.bases.iter().map(|b| ground.difference(*b)).collect();
        bases.sort_unstable();
        Matroid::from_sorted_unchecked(self.n, self.n - self.rank, bases)
    }

    /// Direct sum on the disjoint ground set `E1 ⊔ E2`; elements of `other` are
    /// shifted by `self.n()`.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        let n = self.n + other.n;
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        let shift = self.n;
        let mut bases = Vec::with_capacity(self.bases.len() * other.bases.len());
        for &b1 in &self.bases {
            for &b2 in &other.bases {
                bases.push(b1.union(b2.map(|e| e + shift)));
            }
        }
        bases.sort_unstable();
        Ok(Matroid::from_sorted_unchecked(n, self.rank + other.rank, bases))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn is_basis(&self, s: ElemSet) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    /// Position of `s` in the canonical basis list.
    pub fn basis_index(&self, s: ElemSet) -> Option<usize> {
        self.bases.binary_search(&s).ok()
    }

    pub fn require_basis(&self, s: ElemSet) -> Result<Basis, MatroidError> {
        if self.is_basis(s) {
            Ok(s)
        } else {
            Err(MatroidError::NotABasis(s))
        }
    }

    pub fn is_independent(&self, s: ElemSet) -> bool {
        self.bases.iter().any(|b| s.is_subset(*b))
    }

    /// Rank function: the size of a largest independent subset of `s`.
    pub fn rank_of(&self, s: ElemSet) -> usize {
        self.bases
            .iter()
            .map(|b| b.intersection(s).len())
            .max()
            .unwrap_or(0)
    }

    /// `s` is a flat when every element outside it raises the rank.
    pub fn is_flat(&self, s: ElemSet) -> bool {
        let r = self.rank_of(s);
        self.ground()
            .difference(s)
            .iter()
            .all(|a| self.rank_of(s.with(a)) > r)
    }

    pub fn is_circuit(&self, s: ElemSet) -> bool {
        !s.is_empty()
            && !self.is_independent(s)
            && s.iter().all(|e| self.is_independent(s.without(e)))
    }

    /// All circuits, by ascending cardinality and then integer encoding.
    ///
    /// Enumerates candidate sets of size `1..=rank+1`; a dependent set is kept
    /// when every one-element deletion is independent.
    pub fn circuits(&self) -> Vec<Circuit> {
        let memo: RefCell<HashMap<ElemSet, bool>> = RefCell::new(HashMap::new());
        let independent = |s: ElemSet| -> bool {
            if let Some(&v) = memo.borrow().get(&s) {
                return v;
            }
            let v = self.is_independent(s);
            memo.borrow_mut().insert(s, v);
            v
        };
        let mut out = Vec::new();
        for k in 1..=(self.rank + 1).min(self.n) {
            for s in k_subsets(self.n, k) {
                if !independent(s) && s.iter().all(|e| independent(s.without(e))) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// The unique circuit contained in `b ∪ {x}`.
    ///
    /// Found by shrinking `b ∪ {x}` while it stays dependent, so the result
    /// does not rely on the exchange characterisation it satisfies.
    pub fn fundamental_circuit(&self, b: Basis, x: usize) -> Result<Circuit, MatroidError> {
        self.require_basis(b)?;
        if x >= self.n {
            return Err(MatroidError::ElementOutOfRange {
                set: ElemSet::singleton(x.min(MAX_ELEMENTS - 1)),
                element: x,
                n: self.n,
            });
        }
        if b.contains(x) {
            return Err(MatroidError::ElementInBasis { basis: b, element: x });
        }
        if self.loops().contains(x) {
            return Err(MatroidError::LoopElement(x));
        }
        let mut c = b.with(x);
        for y in b.iter() {
            let smaller = c.without(y);
            if !self.is_independent(smaller) {
                c = smaller;
            }
        }
        Ok(c)
    }

    /// Elements lying in no basis.
    pub fn loops(&self) -> ElemSet {
        let covered = self.bases.iter().fold(ElemSet::EMPTY, |acc, b| acc.union(*b));
        self.ground().difference(covered)
    }

    /// Elements lying in every basis.
    pub fn coloops(&self) -> ElemSet {
        self.bases
            .iter()
            .fold(self.ground(), |acc, b| acc.intersection(*b))
    }

    pub fn loops_coloops(&self) -> (ElemSet, ElemSet) {
        (self.loops(), self.coloops())
    }

    pub fn has_loops_or_coloops(&self) -> bool {
        !self.loops().is_empty() || !self.coloops().is_empty()
    }

    /// Deletes loops and contracts coloops.
    pub fn simplify(&self) -> Simplified {
        let (loops, coloops) = self.loops_coloops();
        let keep = self.ground().difference(loops).difference(coloops);
        let relabel: Vec<usize> = keep.to_vec();
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &old) in relabel.iter().enumerate() {
            new_index[old] = i;
        }
        let mut bases: Vec<Basis> = self
            .bases
            .iter()
            .map(|b| b.intersection(keep).map(|e| new_index[e]))
            .collect();
        bases.sort_unstable();
        let matroid =
            Matroid::from_sorted_unchecked(relabel.len(), self.rank - coloops.len(), bases);
        Simplified { matroid, relabel, loops, coloops }
    }

    /// The r-subsets of the ground set that are not bases, in canonical order.
    pub fn non_bases(&self) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = k_subsets(self.n, self.rank)
            .filter(|s| !self.is_basis(*s))
            .collect();
        out.sort_unstable();
        out
    }

    /// Smallest `y ∈ b2 \ b1` such that both `(b1 - x) + y` and `(b2 - y) + x`
    /// are bases.
    pub fn symmetric_partner(&self, b1: Basis, b2: Basis, x: usize) -> Option<usize> {
        b2.difference(b1)
            .iter()
            .find(|&y| self.is_basis(b1.exchange(x, y)) && self.is_basis(b2.exchange(y, x)))
    }

    pub fn to_data(&self) -> MatroidData {
        MatroidData { n: self.n, bases: self.bases.clone() }
    }

    pub fn from_data(data: &MatroidData) -> Result<Matroid, MatroidError> {
        Matroid::validate_bases(data.n, data.bases.iter().copied())
    }
}

/// Result of [`Matroid::simplify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplified {
    pub matroid: Matroid,
    /// `relabel[i]` is the original label of new element `i`.
    pub relabel: Vec<usize>,
    pub loops: ElemSet,
    pub coloops: ElemSet,
}

impl Simplified {
    /// Maps a basis of the simplified matroid back to the original one.
    pub fn lift_basis(&self, b: Basis) -> Basis {
        b.map(|e| self.relabel[e]).union(self.coloops)
    }

    /// Maps an original basis to the simplified matroid.
    pub fn lower_basis(&self, b: Basis) -> Basis {
        let mut out = ElemSet::EMPTY;
        for (i, &old) in self.relabel.iter().enumerate() {
            if b.contains(old) {
                out = out.with(i);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    fn pyramid() -> Matroid {
        Matroid::validate_bases(
            4,
            [set(&[0, 1]), set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3])],
        )
        .unwrap()
    }

    #[test]
    fn uniform_is_accepted_by_validation() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.num_bases(), 6);
        let again = Matroid::validate_bases(4, u.bases().iter().copied()).unwrap();
        assert_eq!(again, u);
    }

    #[test]
    fn two_disjoint_pairs_fail_exchange() {
        let err = Matroid::validate_bases(4, [set(&[0, 1]), set(&[2, 3])]).unwrap_err();
        assert_eq!(
            err,
            MatroidError::ExchangeAxiomFails { b1: set(&[0, 1]), b2: set(&[2, 3]), x: 0 }
        );
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Matroid::validate_bases(4, std::iter::empty()).unwrap_err(),
            MatroidError::EmptyBases
        );
        assert!(matches!(
            Matroid::validate_bases(4, [set(&[0, 1]), set(&[2])]).unwrap_err(),
            MatroidError::UnequalCardinality { .. }
        ));
        assert!(matches!(
            Matroid::validate_bases(3, [set(&[0, 3])]).unwrap_err(),
            MatroidError::ElementOutOfRange { element: 3, .. }
        ));
        assert_eq!(Matroid::validate_bases(65, [set(&[0])]).unwrap_err(), MatroidError::GroundSetTooLarge(65));
    }

    #[test]
    fn pyramid_is_a_matroid_with_circuit_23() {
        let p = pyramid();
        assert_eq!(p.num_bases(), 5);
        let circuits = p.circuits();
        assert!(circuits.contains(&set(&[2, 3])));
        assert!(!circuits.contains(&set(&[2])));
    }

    #[test]
    fn uniform_circuits_are_r_plus_one_sets() {
        let u = Matroid::uniform(4, 2).unwrap();
        let expected: Vec<ElemSet> = k_subsets(4, 3).collect();
        let mut got = u.circuits();
        got.sort_unstable();
        let mut want = expected;
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn fundamental_circuits() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.fundamental_circuit(set(&[0, 1]), 2).unwrap(), set(&[0, 1, 2]));
        let p = pyramid();
        // (b - 2) + 3 = {0,3} is a basis, (b - 0) + 3 = {2,3} is not
        assert_eq!(p.fundamental_circuit(set(&[0, 2]), 3).unwrap(), set(&[2, 3]));
        assert_eq!(p.fundamental_circuit(set(&[0, 1]), 2).unwrap(), set(&[0, 1, 2]));
        assert_eq!(
            p.fundamental_circuit(set(&[0, 1]), 1).unwrap_err(),
            MatroidError::ElementInBasis { basis: set(&[0, 1]), element: 1 }
        );
        assert_eq!(
            p.fundamental_circuit(set(&[2, 3]), 0).unwrap_err(),
            MatroidError::NotABasis(set(&[2, 3]))
        );
        let with_loop = Matroid::validate_bases(3, [set(&[0, 1])]).unwrap();
        assert_eq!(
            with_loop.fundamental_circuit(set(&[0, 1]), 2).unwrap_err(),
            MatroidError::LoopElement(2)
        );
    }

    #[test]
    fn loops_and_coloops() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.loops_coloops(), (ElemSet::EMPTY, ElemSet::EMPTY));
        assert_eq!(u.simplify().matroid, u);

        let sum = Matroid::uniform(1, 1)
            .unwrap()
            .direct_sum(&Matroid::uniform(2, 1).unwrap())
            .unwrap();
        assert_eq!(sum.coloops(), set(&[0]));
        let s = sum.simplify();
        assert_eq!(s.matroid, Matroid::uniform(2, 1).unwrap());
        assert_eq!(s.relabel, vec![1, 2]);
        assert_eq!(s.lift_basis(set(&[0])), set(&[0, 1]));

        let single = Matroid::validate_bases(3, [set(&[0, 1])]).unwrap();
        assert_eq!(single.loops_coloops(), (set(&[2]), set(&[0, 1])));
        let s = single.simplify().matroid;
        assert_eq!((s.n(), s.rank(), s.bases()), (0, 0, &[ElemSet::EMPTY][..]));
    }

    #[test]
    fn dual_and_direct_sum() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.dual(), u);
        let u12 = Matroid::uniform(2, 1).unwrap();
        let square = u12.direct_sum(&u12).unwrap();
        assert_eq!(
            square.bases(),
            &[set(&[0, 2]), set(&[1, 2]), set(&[0, 3]), set(&[1, 3])][..]
        );
        assert_eq!(Matroid::uniform(3, 4).unwrap_err(), MatroidError::InvalidRank { n: 3, r: 4 });
    }

    #[test]
    fn symmetric_partner_is_smallest() {
        let p = pyramid();
        assert_eq!(p.symmetric_partner(set(&[0, 2]), set(&[1, 3]), 2), Some(3));
    }
}
