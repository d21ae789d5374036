//! Constructive rewriting of exchange sequences between a matroid `M` and
//! `M_b`, the matroid obtained by deleting the basis `b`.
//!
//! Every construction below builds an explicit chain of tuples, checks each
//! member and each step against the target matroid, and only then emits an
//! [`ExchangeSequence`]. The `case_trace` of the result names the branch of
//! the construction responsible for each step.

mod chain;
mod lift;
mod pushdown;
mod quadratic;
mod single;
mod typeb;

use thiserror::Error;

use crate::fiber::{FiberError, Relation, SequenceFault, DEFAULT_FIBER_CAP};
use crate::matroid::{Basis, Matroid, MatroidError};
use crate::removal::{remove_basis, RemovalError};

pub use pushdown::DegreeFunction;
pub use typeb::TypeBRelation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("removing the basis does not leave a matroid: {0}")]
    MbNotMatroid(RemovalError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("oracle failure: {reason}")]
    OracleFailure { reason: String, relation: Option<Relation> },
    #[error("no symmetric exchange moves {x} from {b1} into {b2}")]
    NoExchange { b1: Basis, b2: Basis, x: usize },
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("hint is not a valid sequence: {0}")]
    InvalidHint(SequenceFault),
}

pub(crate) fn precondition(msg: impl Into<String>) -> RewriteError {
    RewriteError::PreconditionViolated(msg.into())
}

pub(crate) fn oracle(msg: impl Into<String>) -> RewriteError {
    RewriteError::OracleFailure { reason: msg.into(), relation: None }
}

/// Smallest `y` in `b2 \ b1` such that `b1 - x + y` and `b2 - y + x` are
/// both bases. Failure means the input violates the exchange axiom.
pub fn find_symmetric_exchange(m: &Matroid, b1: Basis, b2: Basis, x: usize) -> Result<usize, RewriteError> {
    m.require_basis(b1)?;
    m.require_basis(b2)?;
    if !b1.contains(x) || b2.contains(x) {
        return Err(precondition(format!("{x} is not in {b1} \\ {b2}")));
    }
    m.symmetric_partner(b1, b2, x).ok_or(RewriteError::NoExchange { b1, b2, x })
}

/// A matroid `M`, one of its bases `b` and the matroid `M_b`.
///
/// Building the context checks once that `M_b` is a matroid; the rewriting
/// methods then reuse it.
#[derive(Debug, Clone)]
pub struct RemovalContext {
    m: Matroid,
    mb: Matroid,
    b: Basis,
    cap: usize,
}

impl RemovalContext {
    pub fn new(m: &Matroid, b: Basis) -> Result<Self, RewriteError> {
        m.require_basis(b)?;
        let mb = remove_basis(m, b).map_err(RewriteError::MbNotMatroid)?;
        Ok(RemovalContext { m: m.clone(), mb, b, cap: DEFAULT_FIBER_CAP })
    }

    /// Bound on tuples explored by the searches used along the way.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn parent(&self) -> &Matroid {
        &self.m
    }

    pub fn reduced(&self) -> &Matroid {
        &self.mb
    }

    pub fn removed(&self) -> Basis {
        self.b
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

/// See [`RemovalContext::rewrite_quadratic`].
pub fn rewrite_quadratic(
    m: &Matroid,
    b: Basis,
    b1: Basis,
    b2: Basis,
    b2p: Basis,
    b1p: Basis,
    b2pp: Basis,
) -> Result<crate::fiber::ExchangeSequence, RewriteError> {
    RemovalContext::new(m, b)?.rewrite_quadratic(b1, b2, b2p, b1p, b2pp)
}

/// See [`RemovalContext::eliminate_type_b`].
pub fn eliminate_type_b(m: &Matroid, b: Basis, rel: &TypeBRelation) -> Result<crate::fiber::ExchangeSequence, RewriteError> {
    if rel.b != b {
        return Err(precondition(format!("relation is stated for {} rather than {b}", rel.b)));
    }
    RemovalContext::new(m, b)?.eliminate_type_b(rel)
}

/// See [`RemovalContext::eliminate_single_b`].
#[allow(clippy::too_many_arguments)]
pub fn eliminate_single_b(
    m: &Matroid,
    b: Basis,
    b1: Basis,
    b2: Basis,
    b3: Basis,
    b2p: Basis,
    b1p: Basis,
    b2pp: Basis,
    b3p: Basis,
) -> Result<crate::fiber::ExchangeSequence, RewriteError> {
    RemovalContext::new(m, b)?.eliminate_single_b(b1, b2, b3, b2p, b1p, b2pp, b3p)
}

/// See [`RemovalContext::lift_relation`].
pub fn lift_relation(
    m: &Matroid,
    b: Basis,
    rel: &Relation,
    hint: &crate::fiber::ExchangeSequence,
) -> Result<crate::fiber::ExchangeSequence, RewriteError> {
    RemovalContext::new(m, b)?.lift_relation(rel, hint)
}

/// See [`RemovalContext::push_down_relation`].
pub fn push_down_relation(m: &Matroid, b: Basis, rel: &Relation) -> Result<crate::fiber::ExchangeSequence, RewriteError> {
    RemovalContext::new(m, b)?.push_down_relation(rel)
}
