//! Basis-exchange calculus for matroids given by their bases.
//!
//! Matroids live on a ground set `{0, .., n-1}` with `n <= 64`; sets are
//! `u64` bitsets. All arithmetic that touches coordinates is exact.

pub mod audit;
pub mod corpus;
pub mod fiber;
pub mod io;
pub mod lp;
pub mod matrix;
pub mod matroid;
pub mod polytope;
pub mod removal;
pub mod rewriter;
pub mod set;

pub use fiber::{BasisTuple, Content, ExchangeSequence, ExchangeStep, MoveMode, Relation};
pub use matroid::{Basis, Circuit, Matroid, MatroidError};
pub use set::ElemSet;
