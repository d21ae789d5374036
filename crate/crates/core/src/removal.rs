//! Removing a single basis from a matroid.
//!
//! `B(M) \ {b}` is again a basis family exactly when every single-element
//! exchange `(b + p) - q` with `p ∉ b`, `q ∈ b` is a basis of `M` (for `M`
//! without loops and coloops). Sparse paving matroids are the matroids reached
//! from a uniform matroid by a chain of such removals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{Basis, Matroid, MatroidError};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RemovalError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("matroid has loops {loops} or coloops {coloops}; simplify it first")]
    HasLoopsOrColoops { loops: ElemSet, coloops: ElemSet },
    #[error("{basis} cannot be removed: ({basis} + {p}) - {q} is not a basis")]
    NotRemovable { basis: Basis, p: usize, q: usize },
    #[error("{0} is the only basis")]
    LastBasis(Basis),
    #[error("not sparse paving: {0} is neither a basis nor a circuit-hyperplane")]
    NotSparsePaving(ElemSet),
    #[error("{set} has {found} elements, expected the rank {expected}")]
    WrongCardinality { set: ElemSet, expected: usize, found: usize },
    #[error("chain step {step} ({basis}): {reason}")]
    ChainStep { step: usize, basis: ElemSet, reason: Box<RemovalError> },
}

/// Verdict of the removability test for one basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovabilityCertificate {
    pub basis: Basis,
    /// `Some((p, q))` when `(basis + p) - q` is not a basis.
    pub witness: Option<(usize, usize)>,
}

impl RemovabilityCertificate {
    pub fn removable(&self) -> bool {
        self.witness.is_none()
    }

    /// Re-checks the certificate against `m`.
    pub fn audit(&self, m: &Matroid) -> bool {
        match self.witness {
            Some((p, q)) => {
                !self.basis.contains(p)
                    && self.basis.contains(q)
                    && !m.is_basis(self.basis.exchange(q, p))
            }
            None => is_removable(m, self.basis).is_ok_and(|c| c.removable()),
        }
    }
}

fn require_simple(m: &Matroid) -> Result<(), RemovalError> {
    let (loops, coloops) = m.loops_coloops();
    if loops.is_empty() && coloops.is_empty() {
        Ok(())
    } else {
        Err(RemovalError::HasLoopsOrColoops { loops, coloops })
    }
}

/// Tests whether `B(M) \ {b}` is a basis family. The first failing pair
/// `(p, q)`, scanning `p` then `q` in ascending order, is returned as witness.
pub fn is_removable(m: &Matroid, b: Basis) -> Result<RemovabilityCertificate, RemovalError> {
    m.require_basis(b)?;
    require_simple(m)?;
    Ok(removability_unchecked(m, b))
}

fn removability_unchecked(m: &Matroid, b: Basis) -> RemovabilityCertificate {
    for p in m.ground().difference(b) {
        for q in b {
            if !m.is_basis(b.exchange(q, p)) {
                return RemovabilityCertificate { basis: b, witness: Some((p, q)) };
            }
        }
    }
    RemovabilityCertificate { basis: b, witness: None }
}

/// Removability for matroids that may have loops or coloops, decided on the
/// simplified matroid. Witness labels refer to the original ground set.
pub fn is_removable_after_simplify(
    m: &Matroid,
    b: Basis,
) -> Result<RemovabilityCertificate, RemovalError> {
    m.require_basis(b)?;
    let s = m.simplify();
    let cert = removability_unchecked(&s.matroid, s.lower_basis(b));
    Ok(RemovabilityCertificate {
        basis: b,
        witness: cert.witness.map(|(p, q)| (s.relabel[p], s.relabel[q])),
    })
}

/// The matroid with basis family `B(M) \ {b}`.
pub fn remove_basis(m: &Matroid, b: Basis) -> Result<Matroid, RemovalError> {
    m.require_basis(b)?;
    if m.num_bases() == 1 {
        return Err(RemovalError::LastBasis(b));
    }
    let cert = is_removable(m, b)?;
    if let Some((p, q)) = cert.witness {
        return Err(RemovalError::NotRemovable { basis: b, p, q });
    }
    let remaining = m.bases().iter().copied().filter(|&c| c != b);
    Ok(Matroid::validate_bases(m.n(), remaining)?)
}

/// Removal without the loop/coloop precondition; used when replaying chains.
fn remove_basis_general(m: &Matroid, b: Basis) -> Result<Matroid, RemovalError> {
    if m.num_bases() == 1 {
        return Err(RemovalError::LastBasis(b));
    }
    let cert = is_removable_after_simplify(m, b)?;
    if let Some((p, q)) = cert.witness {
        return Err(RemovalError::NotRemovable { basis: b, p, q });
    }
    Ok(Matroid::validate_bases(m.n(), m.bases().iter().copied().filter(|&c| c != b))?)
}

/// Every removable basis, in canonical order.
pub fn removable_bases(m: &Matroid) -> Result<Vec<Basis>, RemovalError> {
    require_simple(m)?;
    Ok(m.bases()
        .par_iter()
        .filter(|&&b| removability_unchecked(m, b).removable())
        .copied()
        .collect())
}

/// A set of rank-many elements that is both a circuit and a flat.
pub fn is_circuit_hyperplane(m: &Matroid, s: ElemSet) -> Result<bool, RemovalError> {
    if s.len() != m.rank() || !s.difference(m.ground()).is_empty() {
        return Err(RemovalError::WrongCardinality { set: s, expected: m.rank(), found: s.len() });
    }
    Ok(m.is_circuit(s) && m.is_flat(s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePavingReport {
    pub sparse_paving: bool,
    pub circuit_hyperplanes: Vec<ElemSet>,
    /// Rank-sized non-bases that are not circuit-hyperplanes.
    pub violations: Vec<ElemSet>,
}

pub fn sparse_paving_report(m: &Matroid) -> SparsePavingReport {
    let mut circuit_hyperplanes = Vec::new();
    let mut violations = Vec::new();
    for s in m.non_bases() {
        if m.is_circuit(s) && m.is_flat(s) {
            circuit_hyperplanes.push(s);
        } else {
            violations.push(s);
        }
    }
    SparsePavingReport { sparse_paving: violations.is_empty(), circuit_hyperplanes, violations }
}

pub fn is_sparse_paving(m: &Matroid) -> bool {
    sparse_paving_report(m).sparse_paving
}

/// A uniform matroid together with an ordered list of removed bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePavingChain {
    pub n: usize,
    pub r: usize,
    pub removed: Vec<ElemSet>,
}

impl SparsePavingChain {
    /// Replays the chain, checking removability before every step. Returns
    /// `M_0 = U(r, n), M_1, ..., M_len`.
    pub fn replay(&self) -> Result<Vec<Matroid>, RemovalError> {
        let mut current = Matroid::uniform(self.n, self.r)?;
        let mut out = vec![current.clone()];
        for (step, &basis) in self.removed.iter().enumerate() {
            let wrap = |reason: RemovalError| RemovalError::ChainStep {
                step,
                basis,
                reason: Box::new(reason),
            };
            if basis.len() != self.r || basis.span() > self.n {
                return Err(wrap(RemovalError::WrongCardinality {
                    set: basis,
                    expected: self.r,
                    found: basis.len(),
                }));
            }
            current = remove_basis_general(&current, basis).map_err(wrap)?;
            out.push(current.clone());
        }
        Ok(out)
    }

    /// The final matroid of the chain.
    pub fn target(&self) -> Result<Matroid, RemovalError> {
        Ok(self.replay()?.pop().expect("replay yields at least the uniform matroid"))
    }
}

/// Chain from `U(r, n)` removing the non-bases of `m` in ascending encoding.
pub fn sparse_paving_chain(m: &Matroid) -> Result<SparsePavingChain, RemovalError> {
    let report = sparse_paving_report(m);
    if let Some(&bad) = report.violations.first() {
        return Err(RemovalError::NotSparsePaving(bad));
    }
    let chain = SparsePavingChain { n: m.n(), r: m.rank(), removed: report.circuit_hyperplanes };
    let last = chain.target()?;
    debug_assert_eq!(&last, m);
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    fn u24() -> Matroid {
        Matroid::uniform(4, 2).unwrap()
    }

    fn pyramid() -> Matroid {
        remove_basis(&u24(), set(&[2, 3])).unwrap()
    }

    #[test]
    fn uniform_bases_are_all_removable() {
        let u = u24();
        assert!(is_removable(&u, set(&[2, 3])).unwrap().removable());
        assert_eq!(removable_bases(&u).unwrap(), u.bases().to_vec());
    }

    #[test]
    fn pyramid_removability() {
        let p = pyramid();
        assert_eq!(p.num_bases(), 5);
        let cert = is_removable(&p, set(&[0, 2])).unwrap();
        assert_eq!(cert.witness, Some((3, 0)));
        assert!(cert.audit(&p));
        assert!(is_removable(&p, set(&[0, 1])).unwrap().removable());
        assert_eq!(removable_bases(&p).unwrap(), vec![set(&[0, 1])]);
        assert_eq!(
            remove_basis(&p, set(&[0, 2])).unwrap_err(),
            RemovalError::NotRemovable { basis: set(&[0, 2]), p: 3, q: 0 }
        );
    }

    #[test]
    fn pyramid_minus_apex_is_the_square() {
        let sq = remove_basis(&pyramid(), set(&[0, 1])).unwrap();
        let u12 = Matroid::uniform(2, 1).unwrap();
        assert_eq!(sq, u12.direct_sum(&u12).unwrap());
        assert!(removable_bases(&sq).unwrap().is_empty());
    }

    #[test]
    fn preconditions() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        assert!(matches!(
            is_removable(&u22, set(&[0, 1])),
            Err(RemovalError::HasLoopsOrColoops { .. })
        ));
        assert_eq!(remove_basis(&u22, set(&[0, 1])).unwrap_err(), RemovalError::LastBasis(set(&[0, 1])));
        assert_eq!(
            is_removable(&u24(), set(&[0])).unwrap_err(),
            RemovalError::Matroid(MatroidError::NotABasis(set(&[0])))
        );
    }

    #[test]
    fn readding_restores_the_matroid() {
        let u = u24();
        let b = set(&[1, 3]);
        let mb = remove_basis(&u, b).unwrap();
        let back = Matroid::validate_bases(4, mb.bases().iter().copied().chain([b])).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn circuit_hyperplanes() {
        let p = pyramid();
        assert!(is_circuit_hyperplane(&p, set(&[2, 3])).unwrap());
        assert!(!is_circuit_hyperplane(&p, set(&[0, 1])).unwrap());
        assert!(matches!(
            is_circuit_hyperplane(&p, set(&[2])),
            Err(RemovalError::WrongCardinality { .. })
        ));
        let u37 = Matroid::uniform(7, 3).unwrap();
        let rep = sparse_paving_report(&u37);
        assert!(rep.sparse_paving && rep.circuit_hyperplanes.is_empty());
    }

    #[test]
    fn chain_of_uniform_is_empty() {
        let chain = sparse_paving_chain(&u24()).unwrap();
        assert!(chain.removed.is_empty());
        assert_eq!(chain.target().unwrap(), u24());
    }

    #[test]
    fn chain_through_coloop_matroid() {
        // U(1,2) minus {0} leaves a loop and a coloop; still a valid chain.
        let chain = SparsePavingChain { n: 2, r: 1, removed: vec![set(&[0])] };
        let m = chain.target().unwrap();
        assert_eq!(m.bases(), &[set(&[1])][..]);
        assert!(is_sparse_paving(&m));
    }

    #[test]
    fn bad_chain_reports_step() {
        let chain = SparsePavingChain { n: 4, r: 2, removed: vec![set(&[2, 3]), set(&[0, 2])] };
        match chain.replay().unwrap_err() {
            RemovalError::ChainStep { step, basis, .. } => {
                assert_eq!((step, basis), (1, set(&[0, 2])));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
