//! Fixed-width index sets over a ground set of at most 64 elements.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., 63}` stored as a bit mask.
///
/// The derived ordering compares the integer encodings, which is the
/// canonical order used for bases throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "ground set of size {n} exceeds {MAX_ELEMENTS}");
        if n == MAX_ELEMENTS {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        assert!(e < MAX_ELEMENTS);
        ElemSet(1u64 << e)
    }

    /// Builds a set from element indices. Panics on an index >= 64.
    pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        elems.into_iter().fold(ElemSet::EMPTY, |s, e| s.with(e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_ELEMENTS && self.0 >> e & 1 == 1
    }

    #[must_use]
    pub fn with(self, e: usize) -> Self {
        assert!(e < MAX_ELEMENTS, "element {e} out of range");
        ElemSet(self.0 | 1u64 << e)
    }

    #[must_use]
    pub fn without(self, e: usize) -> Self {
        if e >= MAX_ELEMENTS {
            return self;
        }
        ElemSet(self.0 & !(1u64 << e))
    }

    /// `(self \ out) ∪ in`, the basic exchange move.
    #[must_use]
    pub fn exchange(self, out: usize, into: usize) -> Self {
        self.without(out).with(into)
    }

    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_elem(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        MAX_ELEMENTS - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Elems {
        Elems(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Indicator vector of length `n`.
    pub fn indicator(self, n: usize) -> Vec<u8> {
        (0..n).map(|e| u8::from(self.contains(e))).collect()
    }

    /// Applies `f` to every element.
    pub fn map<F: FnMut(usize) -> usize>(self, f: F) -> Self {
        ElemSet::from_elems(self.iter().map(f))
    }
}

/// Ascending iterator over the elements of an [`ElemSet`].
#[derive(Clone)]
pub struct Elems(u64);

impl Iterator for Elems {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elems {}

impl IntoIterator for ElemSet {
    type Item = usize;
    type IntoIter = Elems;

    fn into_iter(self) -> Elems {
        self.iter()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElemSet::from_elems(iter)
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl ElemSet {
    /// Display with labels shifted by `offset` (1 for one-based output).
    pub fn display_with_offset(self, offset: usize) -> String {
        let parts: Vec<String> = self.iter().map(|e| (e + offset).to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for e in self.iter() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SetVisitor;

        impl<'de> Visitor<'de> for SetVisitor {
            type Value = ElemSet;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of distinct element indices below {MAX_ELEMENTS}")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ElemSet, A::Error> {
                let mut set = ElemSet::EMPTY;
                while let Some(e) = seq.next_element::<usize>()? {
                    if e >= MAX_ELEMENTS {
                        return Err(de::Error::custom(format!(
                            "element {e} out of range (max {})",
                            MAX_ELEMENTS - 1
                        )));
                    }
                    if set.contains(e) {
                        return Err(de::Error::custom(format!("duplicate element {e}")));
                    }
                    set = set.with(e);
                }
                Ok(set)
            }
        }

        deserializer.deserialize_seq(SetVisitor)
    }
}

/// All `k`-subsets of `{0, .., n-1}` in lexicographic order of their sorted
/// element tuples.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    KSubsets {
        n,
        idx: if k <= n { Some((0..k).collect()) } else { None },
    }
}

pub struct KSubsets {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = ElemSet;

    fn next(&mut self) -> Option<ElemSet> {
        let idx = self.idx.as_mut()?;
        let out = ElemSet::from_elems(idx.iter().copied());
        let k = idx.len();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if idx[i] < self.n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}
