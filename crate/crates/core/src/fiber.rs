//! Degree-k relations among bases and their fiber graphs.
//!
//! A tuple of `k` bases maps to the content vector counting how often each
//! ground element occurs. Two tuples with the same content form a degree-k
//! relation. The strong move set consists of single symmetric exchanges
//! between two members; the weak move set replaces any two members by any
//! pair with the same combined content. All fibers of a degree being
//! connected under a move set means the moves generate that degree.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{Basis, Matroid, MatroidError};
use crate::set::{binomial, k_subsets, ElemSet};

/// Default bound on enumerated tuples.
pub const DEFAULT_FIBER_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("degree mismatch: {lhs} vs {rhs}")]
    DegreeMismatch { lhs: usize, rhs: usize },
    #[error("degree must be at least {min}, got {got}")]
    InvalidDegree { min: usize, got: usize },
    #[error("content vector {content:?} is not a degree-{degree} content for this matroid")]
    InvalidContent { content: Vec<u32>, degree: usize },
    #[error("size cap of {cap} exceeded")]
    SizeCapExceeded { cap: usize },
    #[error("tuples have different content; not a relation")]
    NotARelation,
    #[error("no exchange path: {from} and {to} lie in different fiber components")]
    Disconnected { from: BasisTuple, to: BasisTuple },
}

/// Ordered list of bases; repetitions allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisTuple(pub Vec<Basis>);

impl BasisTuple {
    pub fn new(members: impl IntoIterator<Item = Basis>) -> Self {
        BasisTuple(members.into_iter().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn members(&self) -> &[Basis] {
        &self.0
    }

    /// Sorted copy; tuples with equal canonical forms are the same multiset.
    pub fn canonical(&self) -> BasisTuple {
        let mut v = self.0.clone();
        v.sort_unstable();
        BasisTuple(v)
    }

    pub fn same_multiset(&self, other: &BasisTuple) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn count(&self, b: Basis) -> usize {
        self.0.iter().filter(|&&m| m == b).count()
    }

    pub fn contains(&self, b: Basis) -> bool {
        self.0.contains(&b)
    }

    pub fn content(&self, n: usize) -> Content {
        let mut counts = vec![0u32; n];
        for m in &self.0 {
            for e in m.iter() {
                counts[e] += 1;
            }
        }
        Content(counts)
    }

    /// Multiset union.
    pub fn join(&self, extra: &[Basis]) -> BasisTuple {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        BasisTuple(v)
    }

    /// Removes one copy of `b`, if present.
    pub fn remove_one(&self, b: Basis) -> Option<BasisTuple> {
        let pos = self.0.iter().position(|&m| m == b)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(BasisTuple(v))
    }

    pub fn display_with_offset(&self, offset: usize) -> String {
        let parts: Vec<String> = self.0.iter().map(|m| m.display_with_offset(offset)).collect();
        format!("({})", parts.join(" "))
    }
}

impl fmt::Display for BasisTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with_offset(0))
    }
}

/// Element multiplicities of a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Content(pub Vec<u32>);

impl Content {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }
}

/// A pair of tuples of equal degree, wire form `{"lhs": .., "rhs": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: BasisTuple,
    pub rhs: BasisTuple,
}

/// Member `i` gives `x` to member `j` and receives `y` from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeStep {
    pub i: usize,
    pub j: usize,
    pub x: usize,
    pub y: usize,
}

impl ExchangeStep {
    pub fn reversed(self) -> ExchangeStep {
        ExchangeStep { i: self.i, j: self.j, x: self.y, y: self.x }
    }

    /// Applies the step after checking it is a well-formed exchange of two
    /// distinct members; basis membership is the caller's concern.
    pub fn apply(&self, members: &mut [Basis]) -> Result<(), String> {
        let k = members.len();
        if self.i == self.j || self.i >= k || self.j >= k {
            return Err(format!("positions ({}, {}) invalid for degree {k}", self.i, self.j));
        }
        let (mi, mj) = (members[self.i], members[self.j]);
        if !mi.contains(self.x) || mj.contains(self.x) {
            return Err(format!("{} is not in {mi} \\ {mj}", self.x));
        }
        if !mj.contains(self.y) || mi.contains(self.y) {
            return Err(format!("{} is not in {mj} \\ {mi}", self.y));
        }
        members[self.i] = mi.exchange(self.x, self.y);
        members[self.j] = mj.exchange(self.y, self.x);
        Ok(())
    }
}

/// A start tuple and a list of exchange steps. `case_trace`, when present,
/// labels the construction that produced each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeSequence {
    pub start: BasisTuple,
    pub steps: Vec<ExchangeStep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub case_trace: Vec<String>,
}

impl ExchangeSequence {
    pub fn empty(start: BasisTuple) -> Self {
        ExchangeSequence { start, steps: Vec::new(), case_trace: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every intermediate tuple, start and end included. Steps must be
    /// well-formed.
    pub fn tuples(&self) -> Result<Vec<BasisTuple>, SequenceFault> {
        let mut cur = self.start.0.clone();
        let mut out = vec![self.start.clone()];
        for (index, step) in self.steps.iter().enumerate() {
            step.apply(&mut cur).map_err(|reason| SequenceFault::InvalidStep { index, reason })?;
            out.push(BasisTuple(cur.clone()));
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<BasisTuple, SequenceFault> {
        Ok(self.tuples()?.pop().expect("tuples() includes the start"))
    }
}

/// Why a sequence failed to replay.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum SequenceFault {
    #[error("start member {position} is not a basis")]
    StartNotBasis { position: usize },
    #[error("step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },
    #[error("sequence ends at {found}, expected {expected}")]
    EndMismatch { found: BasisTuple, expected: BasisTuple },
}

impl SequenceFault {
    pub fn step_index(&self) -> Option<usize> {
        match self {
            SequenceFault::InvalidStep { index, .. } => Some(*index),
            _ => None,
        }
    }
}

/// Replays `seq` in `m`: every member of every intermediate tuple must be a
/// basis, and the final tuple must equal `expected_end` up to reordering.
pub fn verify_sequence(
    m: &Matroid,
    seq: &ExchangeSequence,
    expected_end: &BasisTuple,
) -> Result<(), SequenceFault> {
    let mut cur = seq.start.0.clone();
    if let Some(position) = cur.iter().position(|&b| !m.is_basis(b)) {
        return Err(SequenceFault::StartNotBasis { position });
    }
    for (index, step) in seq.steps.iter().enumerate() {
        step.apply(&mut cur).map_err(|reason| SequenceFault::InvalidStep { index, reason })?;
        for p in [step.i, step.j] {
            if !m.is_basis(cur[p]) {
                return Err(SequenceFault::InvalidStep {
                    index,
                    reason: format!("member {p} becomes {}, not a basis", cur[p]),
                });
            }
        }
    }
    let found = BasisTuple(cur);
    if !found.same_multiset(expected_end) {
        return Err(SequenceFault::EndMismatch { found, expected: expected_end.clone() });
    }
    Ok(())
}

/// Multiset difference of two sorted slices.
fn sorted_difference(a: &[Basis], b: &[Basis]) -> Vec<Basis> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() {
        if j < b.len() && a[i] == b[j] {
            i += 1;
            j += 1;
        } else if j < b.len() && b[j] < a[i] {
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
        }
    }
    out
}

/// Two tuples that are not one symmetric exchange apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("tuples are not one exchange apart")]
pub struct NotAdjacent;

/// The single exchange turning `current` into a reordering of `target`.
///
/// `Ok(None)` when both are already the same multiset; `Err` when they do not
/// differ by one symmetric exchange.
pub fn step_towards(current: &[Basis], target: &[Basis]) -> Result<Option<ExchangeStep>, NotAdjacent> {
    if current.len() != target.len() {
        return Err(NotAdjacent);
    }
    let mut a = current.to_vec();
    let mut b = target.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let removed = sorted_difference(&a, &b);
    let added = sorted_difference(&b, &a);
    match (removed.as_slice(), added.as_slice()) {
        ([], []) => Ok(None),
        (&[r1, r2], &[a1, a2]) => {
            let p1 = current.iter().position(|&m| m == r1).ok_or(NotAdjacent)?;
            let p2 = current
                .iter()
                .enumerate()
                .position(|(p, &m)| p != p1 && m == r2)
                .ok_or(NotAdjacent)?;
            for (to1, to2) in [(a1, a2), (a2, a1)] {
                let (gone, come) = (r1.difference(to1), to1.difference(r1));
                if gone.len() != 1 || come.len() != 1 {
                    continue;
                }
                let (x, y) = (gone.min_elem().unwrap(), come.min_elem().unwrap());
                if r2.contains(y) && !r2.contains(x) && r2.exchange(y, x) == to2 {
                    let step = if p1 < p2 {
                        ExchangeStep { i: p1, j: p2, x, y }
                    } else {
                        ExchangeStep { i: p2, j: p1, x: y, y: x }
                    };
                    return Ok(Some(step));
                }
            }
            Err(NotAdjacent)
        }
        _ => Err(NotAdjacent),
    }
}

/// Converts a chain of multisets, consecutive ones one exchange apart, into
/// positional steps starting from `start`.
pub fn positionalize(start: &BasisTuple, chain: &[BasisTuple]) -> Result<Vec<ExchangeStep>, usize> {
    let mut cur = start.0.clone();
    let mut steps = Vec::new();
    for (k, next) in chain.iter().enumerate() {
        match step_towards(&cur, &next.0) {
            Ok(None) => {}
            Ok(Some(step)) => {
                step.apply(&mut cur).map_err(|_| k)?;
                steps.push(step);
            }
            Err(NotAdjacent) => return Err(k),
        }
    }
    Ok(steps)
}

/// Checks degrees, membership and equal content.
pub fn is_relation(m: &Matroid, lhs: &BasisTuple, rhs: &BasisTuple) -> Result<bool, FiberError> {
    if lhs.degree() != rhs.degree() {
        return Err(FiberError::DegreeMismatch { lhs: lhs.degree(), rhs: rhs.degree() });
    }
    for &b in lhs.0.iter().chain(&rhs.0) {
        m.require_basis(b)?;
    }
    Ok(lhs.content(m.n()) == rhs.content(m.n()))
}

/// All multisets of `k` bases with content `c`, canonical and sorted.
pub fn fiber(m: &Matroid, c: &Content, k: usize, cap: usize) -> Result<Vec<BasisTuple>, FiberError> {
    if c.0.len() != m.n() || c.total() != (k * m.rank()) as u64 {
        return Err(FiberError::InvalidContent { content: c.0.clone(), degree: k });
    }
    let mut out = Vec::new();
    let mut remaining = c.0.clone();
    let mut chosen = Vec::with_capacity(k);
    fiber_rec(m.bases(), 0, k, &mut remaining, &mut chosen, &mut out, cap)?;
    Ok(out)
}

fn fiber_rec(
    bases: &[Basis],
    from: usize,
    k: usize,
    remaining: &mut [u32],
    chosen: &mut Vec<Basis>,
    out: &mut Vec<BasisTuple>,
    cap: usize,
) -> Result<(), FiberError> {
    if chosen.len() == k {
        if remaining.iter().all(|&r| r == 0) {
            if out.len() >= cap {
                return Err(FiberError::SizeCapExceeded { cap });
            }
            out.push(BasisTuple(chosen.clone()));
        }
        return Ok(());
    }
    for idx in from..bases.len() {
        let b = bases[idx];
        if b.iter().any(|e| remaining[e] == 0) {
            continue;
        }
        for e in b.iter() {
            remaining[e] -= 1;
        }
        chosen.push(b);
        let r = fiber_rec(bases, idx, k, remaining, chosen, out, cap);
        chosen.pop();
        for e in b.iter() {
            remaining[e] += 1;
        }
        r?;
    }
    Ok(())
}

/// All multisets of `k` bases, canonical, in lexicographic order of basis
/// indices.
pub fn all_tuples(m: &Matroid, k: usize, cap: usize) -> Result<Vec<BasisTuple>, FiberError> {
    let total = binomial((m.num_bases() + k).saturating_sub(1) as u64, k as u64);
    if total > cap as u64 {
        return Err(FiberError::SizeCapExceeded { cap });
    }
    let bases = m.bases();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; k];
    if bases.is_empty() {
        return Ok(out);
    }
    loop {
        out.push(BasisTuple(idx.iter().map(|&i| bases[i]).collect()));
        // next non-decreasing index sequence
        let mut p = k;
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            if idx[p] + 1 < bases.len() {
                let v = idx[p] + 1;
                for q in idx.iter_mut().skip(p) {
                    *q = v;
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveMode {
    Strong,
    Weak,
}

impl std::str::FromStr for MoveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strong" => Ok(MoveMode::Strong),
            "weak" => Ok(MoveMode::Weak),
            other => Err(format!("unknown mode {other:?}, expected strong or weak")),
        }
    }
}

impl fmt::Display for MoveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveMode::Strong => "strong",
            MoveMode::Weak => "weak",
        })
    }
}

/// Canonical tuples reachable from `t` by one strong move.
pub fn strong_neighbors(m: &Matroid, t: &BasisTuple) -> Vec<(ExchangeStep, BasisTuple)> {
    let mem = &t.0;
    let mut out = Vec::new();
    for i in 0..mem.len() {
        for j in i + 1..mem.len() {
            if mem[i] == mem[j] || (j > i + 1 && mem[j] == mem[j - 1]) {
                continue;
            }
            for x in mem[i].difference(mem[j]) {
                for y in mem[j].difference(mem[i]) {
                    let (bi, bj) = (mem[i].exchange(x, y), mem[j].exchange(y, x));
                    if m.is_basis(bi) && m.is_basis(bj) {
                        let mut next = mem.clone();
                        next[i] = bi;
                        next[j] = bj;
                        out.push((ExchangeStep { i, j, x, y }, BasisTuple(next).canonical()));
                    }
                }
            }
        }
    }
    out
}

/// Canonical tuples reachable from `t` by replacing two members with any
/// pair of bases of the same combined content.
pub fn weak_neighbors(m: &Matroid, t: &BasisTuple) -> Vec<BasisTuple> {
    let mem = &t.0;
    let mut out = Vec::new();
    for i in 0..mem.len() {
        for j in i + 1..mem.len() {
            let common = mem[i].intersection(mem[j]);
            let diff = mem[i].union(mem[j]).difference(common);
            let half = diff.len() / 2;
            let labels = diff.to_vec();
            for pick in k_subsets(labels.len(), half) {
                let s: ElemSet = pick.iter().map(|p| labels[p]).collect();
                let (u, w) = (common.union(s), common.union(diff.difference(s)));
                if (u, w) != (mem[i], mem[j]) && m.is_basis(u) && m.is_basis(w) {
                    let mut next = mem.clone();
                    next[i] = u;
                    next[j] = w;
                    out.push(BasisTuple(next).canonical());
                }
            }
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connectivity of one fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRecord {
    pub degree: usize,
    pub content: Content,
    pub fiber_size: usize,
    pub components: usize,
    pub mode: MoveMode,
    pub pass: bool,
    /// Two tuples in different components when the fiber is disconnected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(BasisTuple, BasisTuple)>,
}

/// Connectivity of every fiber of one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub mode: MoveMode,
    pub fibers: usize,
    pub tuples: usize,
    pub pass: bool,
    pub records: Vec<FiberRecord>,
}

/// Number of connected components of a fiber under `mode`.
pub fn fiber_components(m: &Matroid, members: &[BasisTuple], mode: MoveMode) -> (usize, Option<(BasisTuple, BasisTuple)>) {
    let index: HashMap<&BasisTuple, usize> = members.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut uf = UnionFind::new(members.len());
    for (i, t) in members.iter().enumerate() {
        let nbrs: Vec<BasisTuple> = match mode {
            MoveMode::Strong => strong_neighbors(m, t).into_iter().map(|(_, n)| n).collect(),
            MoveMode::Weak => weak_neighbors(m, t),
        };
        for n in nbrs {
            let j = *index.get(&n).expect("moves preserve content");
            uf.union(i, j);
        }
    }
    let mut roots: Vec<usize> = (0..members.len()).map(|i| uf.find(i)).collect();
    let witness = roots
        .iter()
        .position(|&r| r != roots[0])
        .map(|p| (members[0].clone(), members[p].clone()));
    roots.sort_unstable();
    roots.dedup();
    (roots.len(), witness)
}

/// Builds every degree-`k` fiber and checks connectivity under `mode`.
pub fn fiber_graph_connected(m: &Matroid, k: usize, mode: MoveMode, cap: usize) -> Result<DegreeReport, FiberError> {
    if k < 2 {
        return Err(FiberError::InvalidDegree { min: 2, got: k });
    }
    let tuples = all_tuples(m, k, cap)?;
    let total = tuples.len();
    let mut groups: BTreeMap<Content, Vec<BasisTuple>> = BTreeMap::new();
    for t in tuples {
        groups.entry(t.content(m.n())).or_default().push(t);
    }
    let groups: Vec<(Content, Vec<BasisTuple>)> = groups.into_iter().collect();
    let records: Vec<FiberRecord> = groups
        .into_par_iter()
        .map(|(content, members)| {
            let (components, witness) = fiber_components(m, &members, mode);
            FiberRecord {
                degree: k,
                content,
                fiber_size: members.len(),
                components,
                mode,
                pass: components == 1,
                witness,
            }
        })
        .collect();
    Ok(DegreeReport {
        degree: k,
        mode,
        fibers: records.len(),
        tuples: total,
        pass: records.iter().all(|r| r.pass),
        records,
    })
}

/// Runs [`fiber_graph_connected`] for every degree `2..=max_degree`.
pub fn verify_up_to(m: &Matroid, max_degree: usize, mode: MoveMode, cap: usize) -> Result<Vec<DegreeReport>, FiberError> {
    (2..=max_degree).map(|k| fiber_graph_connected(m, k, mode, cap)).collect()
}

/// Shortest strong-move path from `from` to a reordering of `to`.
pub fn find_exchange_path(m: &Matroid, from: &BasisTuple, to: &BasisTuple, cap: usize) -> Result<ExchangeSequence, FiberError> {
    if !is_relation(m, from, to)? {
        return Err(FiberError::NotARelation);
    }
    let start = from.canonical();
    let goal = to.canonical();
    let mut parent: HashMap<BasisTuple, Option<BasisTuple>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start.clone()]);
    let mut found = start == goal;
    while let Some(t) = queue.pop_front() {
        if found {
            break;
        }
        for (_, n) in strong_neighbors(m, &t) {
            if parent.contains_key(&n) {
                continue;
            }
            if parent.len() >= cap {
                return Err(FiberError::SizeCapExceeded { cap });
            }
            parent.insert(n.clone(), Some(t.clone()));
            if n == goal {
                found = true;
                break;
            }
            queue.push_back(n);
        }
    }
    if !found {
        return Err(FiberError::Disconnected { from: from.clone(), to: to.clone() });
    }
    let mut chain = vec![goal.clone()];
    let mut cur = goal;
    while let Some(Some(p)) = parent.get(&cur) {
        chain.push(p.clone());
        cur = p.clone();
    }
    chain.reverse();
    let steps = positionalize(from, &chain).expect("BFS chain consists of single exchanges");
    Ok(ExchangeSequence { start: from.clone(), steps, case_trace: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    fn tuple(ms: &[&[usize]]) -> BasisTuple {
        BasisTuple(ms.iter().map(|m| set(m)).collect())
    }

    fn pyramid() -> Matroid {
        Matroid::validate_bases(
            4,
            [set(&[0, 1]), set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3])],
        )
        .unwrap()
    }

    #[test]
    fn relations_in_u24() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert!(is_relation(&u, &tuple(&[&[0, 1], &[2, 3]]), &tuple(&[&[0, 2], &[1, 3]])).unwrap());
        assert!(!is_relation(&u, &tuple(&[&[0, 1], &[0, 1]]), &tuple(&[&[0, 1], &[2, 3]])).unwrap());
        assert_eq!(
            is_relation(&u, &tuple(&[&[0, 1]]), &tuple(&[&[0, 1], &[2, 3]])).unwrap_err(),
            FiberError::DegreeMismatch { lhs: 1, rhs: 2 }
        );
        assert!(matches!(
            is_relation(&pyramid(), &tuple(&[&[2, 3]]), &tuple(&[&[0, 1]])),
            Err(FiberError::Matroid(MatroidError::NotABasis(_)))
        ));
    }

    #[test]
    fn fibers_of_small_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        let ones = Content(vec![1, 1, 1, 1]);
        let f = fiber(&u, &ones, 2, DEFAULT_FIBER_CAP).unwrap();
        assert_eq!(
            f,
            vec![tuple(&[&[0, 1], &[2, 3]]), tuple(&[&[0, 2], &[1, 3]]), tuple(&[&[1, 2], &[0, 3]])]
        );
        assert_eq!(fiber(&pyramid(), &ones, 2, DEFAULT_FIBER_CAP).unwrap().len(), 2);
        assert!(fiber(&u, &Content(vec![2, 0, 0, 0]), 1, DEFAULT_FIBER_CAP).unwrap().is_empty());
        assert!(matches!(
            fiber(&u, &ones, 2, 2),
            Err(FiberError::SizeCapExceeded { cap: 2 })
        ));
    }

    #[test]
    fn u24_degree_two_fiber_is_a_triangle() {
        let u = Matroid::uniform(4, 2).unwrap();
        let rep = fiber_graph_connected(&u, 2, MoveMode::Strong, DEFAULT_FIBER_CAP).unwrap();
        assert!(rep.pass);
        let rec = rep.records.iter().find(|r| r.content == Content(vec![1, 1, 1, 1])).unwrap();
        assert_eq!(rec.fiber_size, 3);
        let members = fiber(&u, &rec.content, 2, DEFAULT_FIBER_CAP).unwrap();
        for t in &members {
            assert_eq!(strong_neighbors(&u, t).len(), 4);
        }
    }

    #[test]
    fn all_tuples_counts() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(all_tuples(&u, 2, DEFAULT_FIBER_CAP).unwrap().len(), 21);
        assert_eq!(all_tuples(&u, 3, DEFAULT_FIBER_CAP).unwrap().len(), 56);
        assert!(all_tuples(&u, 3, 10).is_err());
    }

    #[test]
    fn paths() {
        let u = Matroid::uniform(4, 2).unwrap();
        let from = tuple(&[&[0, 1], &[2, 3]]);
        let to = tuple(&[&[0, 2], &[1, 3]]);
        let seq = find_exchange_path(&u, &from, &to, DEFAULT_FIBER_CAP).unwrap();
        assert_eq!(seq.steps, vec![ExchangeStep { i: 0, j: 1, x: 1, y: 2 }]);
        verify_sequence(&u, &seq, &to).unwrap();

        let same = find_exchange_path(&u, &from, &from, DEFAULT_FIBER_CAP).unwrap();
        assert!(same.is_empty());
        verify_sequence(&u, &same, &from).unwrap();

        let p = pyramid();
        let from = tuple(&[&[0, 2], &[1, 3]]);
        let to = tuple(&[&[0, 3], &[1, 2]]);
        let seq = find_exchange_path(&p, &from, &to, DEFAULT_FIBER_CAP).unwrap();
        assert_eq!(seq.len(), 1);
        verify_sequence(&p, &seq, &to).unwrap();
    }

    #[test]
    fn replay_catches_non_basis() {
        let u = Matroid::uniform(4, 2).unwrap();
        let start = tuple(&[&[0, 2], &[1, 3]]);
        // swapping 0 and 3 produces {2,3}
        let seq = ExchangeSequence { start, steps: vec![ExchangeStep { i: 0, j: 1, x: 0, y: 3 }], case_trace: vec![] };
        let end = tuple(&[&[2, 3], &[0, 1]]);
        verify_sequence(&u, &seq, &end).unwrap();
        let fault = verify_sequence(&pyramid(), &seq, &end).unwrap_err();
        assert_eq!(fault.step_index(), Some(0));
    }

    #[test]
    fn end_mismatch() {
        let u = Matroid::uniform(4, 2).unwrap();
        let t = tuple(&[&[0, 1], &[2, 3]]);
        let seq = ExchangeSequence::empty(t.clone());
        verify_sequence(&u, &seq, &t).unwrap();
        assert!(matches!(
            verify_sequence(&u, &seq, &tuple(&[&[0, 2], &[1, 3]])),
            Err(SequenceFault::EndMismatch { .. })
        ));
    }

    #[test]
    fn step_towards_finds_positions() {
        let cur = vec![set(&[0, 1]), set(&[4, 5]), set(&[2, 3])];
        let target = vec![set(&[4, 5]), set(&[1, 3]), set(&[0, 2])];
        let step = step_towards(&cur, &target).unwrap().unwrap();
        let mut applied = cur.clone();
        step.apply(&mut applied).unwrap();
        assert!(BasisTuple(applied).same_multiset(&BasisTuple(target)));
        assert_eq!(step_towards(&cur, &cur), Ok(None));
        assert!(step_towards(&cur, &[set(&[0, 1]), set(&[4, 5]), set(&[2, 6])]).is_err());
    }
}
