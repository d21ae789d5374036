//! Base polytopes: vertices, edges and the edge-direction criterion.
//!
//! Geometric edges are decided by an exact LP on the midpoint of a vertex
//! pair. For `v, w` in `V` we maximise the total weight a convex combination
//! of `V` representing `(v + w) / 2` can put on vertices other than `v, w`.
//! The optimum is zero exactly when `[v, w]` is an edge; the dual solution is
//! then a functional exposing the edge, otherwise the primal is an explicit
//! convex combination through other vertices.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LpOutcome};
use crate::matroid::{Basis, Matroid, MatroidError};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("vertices have unequal coordinate sums: {first} and {other}")]
    UnequalCardinality { first: ElemSet, other: ElemSet },
}

/// Distinct 0/1 points of `R^n`, each stored as its support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSet {
    pub n: usize,
    pub vertices: Vec<ElemSet>,
}

impl VertexSet {
    /// Sorts and deduplicates the points.
    pub fn new(n: usize, vertices: impl IntoIterator<Item = ElemSet>) -> Self {
        let mut vertices: Vec<ElemSet> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet { n, vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn without(&self, v: ElemSet) -> VertexSet {
        VertexSet { n: self.n, vertices: self.vertices.iter().copied().filter(|&u| u != v).collect() }
    }

    fn equal_cardinality(&self) -> Result<(), PolytopeError> {
        if let Some(&first) = self.vertices.first() {
            if let Some(&other) = self.vertices.iter().find(|u| u.len() != first.len()) {
                return Err(PolytopeError::UnequalCardinality { first, other });
            }
        }
        Ok(())
    }
}

/// The half-space `sum_{i in support} x_i <= bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub support: ElemSet,
    pub bound: usize,
}

impl HalfSpace {
    /// Cut below the vertex of `b`: bound `|b| - 1`.
    pub fn below(b: Basis) -> Self {
        HalfSpace { support: b, bound: b.len().saturating_sub(1) }
    }

    pub fn contains(&self, u: ElemSet) -> bool {
        u.intersection(self.support).len() <= self.bound
    }

    pub fn on_boundary(&self, u: ElemSet) -> bool {
        u.intersection(self.support).len() == self.bound
    }
}

pub fn vertices(m: &Matroid) -> VertexSet {
    VertexSet { n: m.n(), vertices: m.bases().to_vec() }
}

/// Index pairs `(i, j)`, `i < j`, of bases differing in exactly one element.
pub fn exchange_edges(m: &Matroid) -> Vec<(usize, usize)> {
    let bases = m.bases();
    let mut out = Vec::new();
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            if bases[i].difference(bases[j]).len() == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Exact evidence for or against `[v, w]` being an edge. Rationals are
/// serialized as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum EdgeCertificate {
    /// Dual solution `y` (one entry per coordinate, then one for the
    /// normalisation row): `h(u) = sum_i 2 u_i y_i + y_n` vanishes on `v, w`
    /// and is at least 1 on every other vertex.
    Edge {
        #[serde(with = "rational_strings")]
        dual: Vec<BigRational>,
    },
    /// Convex coefficients over all vertices reproducing the midpoint with
    /// positive weight outside `{v, w}`.
    Interior {
        #[serde(with = "rational_strings")]
        coefficients: Vec<BigRational>,
    },
}

mod rational_strings {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| crate::matrix::parse_rational(t).map_err(de::Error::custom))
            .collect()
    }
}

impl EdgeCertificate {
    pub fn is_edge(&self) -> bool {
        matches!(self, EdgeCertificate::Edge { .. })
    }

    /// Re-checks the certificate with exact arithmetic.
    pub fn audit(&self, vs: &VertexSet, i: usize, j: usize) -> bool {
        let (v, w) = (vs.vertices[i], vs.vertices[j]);
        let n = vs.n;
        match self {
            EdgeCertificate::Edge { dual } => {
                if dual.len() != n + 1 {
                    return false;
                }
                let h = |u: ElemSet| -> BigRational {
                    let mut acc = dual[n].clone();
                    for e in u.iter() {
                        acc += &dual[e] * BigRational::from_integer(2.into());
                    }
                    acc
                };
                h(v).is_zero()
                    && h(w).is_zero()
                    && vs
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .all(|(_, &u)| h(u) >= BigRational::one())
            }
            EdgeCertificate::Interior { coefficients } => {
                if coefficients.len() != vs.len() || coefficients.iter().any(|c| c.is_negative()) {
                    return false;
                }
                let total: BigRational = coefficients.iter().sum();
                let others: BigRational = coefficients
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, c)| c.clone())
                    .sum();
                let half = BigRational::new(1.into(), 2.into());
                let midpoint_ok = (0..n).all(|e| {
                    let got: BigRational = vs
                        .vertices
                        .iter()
                        .zip(coefficients)
                        .filter(|(u, _)| u.contains(e))
                        .map(|(_, c)| c.clone())
                        .sum();
                    let want = &half * BigRational::from_integer(BigInt::from(u8::from(v.contains(e)) + u8::from(w.contains(e))));
                    got == want
                });
                total.is_one() && others.is_positive() && midpoint_ok
            }
        }
    }
}

/// Decides whether `[V_i, V_j]` is an edge of `conv(V)` by exact LP.
pub fn edge_certificate(vs: &VertexSet, i: usize, j: usize) -> EdgeCertificate {
    let (v, w) = (vs.vertices[i], vs.vertices[j]);
    let n = vs.n;
    let k = vs.len();
    let int = |x: i64| BigRational::from_integer(BigInt::from(x));
    // rows: 2 * coordinates, then sum of weights
    let mut a = vec![vec![BigRational::zero(); k]; n + 1];
    for (col, u) in vs.vertices.iter().enumerate() {
        for e in u.iter() {
            a[e][col] = int(2);
        }
        a[n][col] = int(1);
    }
    let mut b: Vec<BigRational> = (0..n)
        .map(|e| int(i64::from(v.contains(e)) + i64::from(w.contains(e))))
        .collect();
    b.push(int(1));
    let c: Vec<BigRational> = (0..k).map(|col| int(i64::from(col != i && col != j))).collect();
    match lp::maximize(&a, &b, &c) {
        LpOutcome::Optimal { x, y, value } => {
            debug_assert!(lp::audit_optimal(&a, &b, &c, &x, &y));
            if value.is_zero() {
                // The LP dual is min b·y s.t. Aᵀy >= c; shift so that h(v) = 0.
                EdgeCertificate::Edge { dual: y }
            } else {
                EdgeCertificate::Interior { coefficients: x }
            }
        }
        other => unreachable!("midpoint LP is feasible and bounded, got {other:?}"),
    }
}

/// All geometric edges of `conv(V)` as index pairs `(i, j)`, `i < j`.
pub fn geometric_edges(vs: &VertexSet) -> Vec<(usize, usize)> {
    let k = vs.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    pairs
        .into_par_iter()
        .filter(|&(i, j)| edge_certificate(vs, i, j).is_edge())
        .collect()
}

/// A geometric edge whose direction is not of the form `e_i - e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GgmsViolation {
    pub i: usize,
    pub j: usize,
    pub v: ElemSet,
    pub w: ElemSet,
    pub certificate: EdgeCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GgmsVerdict {
    pub violation: Option<GgmsViolation>,
}

impl GgmsVerdict {
    pub fn passes(&self) -> bool {
        self.violation.is_none()
    }
}

/// Two vertices other than `v, w` summing to `v + w`, if any.
fn splitting_pair(vs: &VertexSet, lookup: &HashSet<ElemSet>, v: ElemSet, w: ElemSet) -> Option<(ElemSet, ElemSet)> {
    let common = v.intersection(w);
    let diff = v.union(w).difference(common);
    vs.vertices.iter().find_map(|&u1| {
        if u1 == v || u1 == w || !common.is_subset(u1) || !u1.is_subset(v.union(w)) {
            return None;
        }
        let u2 = common.union(diff.difference(u1));
        (u2 != v && u2 != w && lookup.contains(&u2)).then_some((u1, u2))
    })
}

/// Checks that every edge of `conv(V)` is parallel to some `e_i - e_j`.
///
/// Pairs at Hamming distance 2 are always such edges, so only pairs further
/// apart are examined. A pair whose midpoint is the midpoint of two other
/// vertices is discarded directly; the LP decides the rest.
pub fn ggms_check(vs: &VertexSet) -> Result<GgmsVerdict, PolytopeError> {
    vs.equal_cardinality()?;
    let lookup: HashSet<ElemSet> = vs.vertices.iter().copied().collect();
    let k = vs.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|&(i, j)| vs.vertices[i].difference(vs.vertices[j]).len() >= 2)
        .collect();
    let violation = pairs.into_par_iter().find_map_first(|(i, j)| {
        let (v, w) = (vs.vertices[i], vs.vertices[j]);
        if splitting_pair(vs, &lookup, v, w).is_some() {
            return None;
        }
        let certificate = edge_certificate(vs, i, j);
        certificate.is_edge().then_some(GgmsViolation { i, j, v, w, certificate })
    });
    Ok(GgmsVerdict { violation })
}

/// Outcome of cutting `P_M` with the half-space below the vertex of `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub basis: Basis,
    pub half_space: HalfSpace,
    /// Bases at exchange distance one from `b`.
    pub exchange_neighbors: Vec<Basis>,
    /// Every exchange neighbour satisfies the cut with equality.
    pub neighbors_on_hyperplane: bool,
    /// Neighbours of `v_b` along geometric edges, found by LP.
    pub geometric_neighbors: Vec<Basis>,
    /// Geometric edges at `v_b` reaching strictly below the hyperplane; each
    /// would create a new vertex of `P_M ∩ H⁻`.
    pub crossing_edges: Vec<Basis>,
    /// Vertices of the cut polytope, i.e. all vertices except `v_b`.
    pub cut_vertices: usize,
}

impl CutReport {
    pub fn passes(&self) -> bool {
        self.neighbors_on_hyperplane && self.crossing_edges.is_empty()
    }
}

pub fn cut_check(m: &Matroid, b: Basis) -> Result<CutReport, PolytopeError> {
    let idx = m.basis_index(b).ok_or(MatroidError::NotABasis(b))?;
    let half_space = HalfSpace::below(b);
    let exchange_neighbors: Vec<Basis> = m
        .bases()
        .iter()
        .copied()
        .filter(|u| u.difference(b).len() == 1)
        .collect();
    let neighbors_on_hyperplane = exchange_neighbors.iter().all(|&u| half_space.on_boundary(u));
    let vs = vertices(m);
    let geometric_neighbors: Vec<Basis> = (0..vs.len())
        .into_par_iter()
        .filter(|&k| k != idx && edge_certificate(&vs, idx.min(k), idx.max(k)).is_edge())
        .map(|k| vs.vertices[k])
        .collect();
    let crossing_edges = geometric_neighbors
        .iter()
        .copied()
        .filter(|&u| !half_space.on_boundary(u))
        .collect();
    debug_assert!(vs.vertices.iter().filter(|&&u| u != b).all(|&u| half_space.contains(u)));
    Ok(CutReport {
        basis: b,
        half_space,
        exchange_neighbors,
        neighbors_on_hyperplane,
        geometric_neighbors,
        crossing_edges,
        cut_vertices: vs.len() - 1,
    })
}

/// Graphviz rendering of an edge list. Labels are shifted by `offset`.
pub fn to_dot(vs: &VertexSet, edges: &[(usize, usize)], offset: usize) -> String {
    let mut out = String::from("graph polytope {\n");
    for (k, v) in vs.vertices.iter().enumerate() {
        out.push_str(&format!("  v{k} [label=\"{}\"];\n", v.display_with_offset(offset)));
    }
    for &(i, j) in edges {
        out.push_str(&format!("  v{i} -- v{j};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    fn sorted(mut v: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
        v.sort_unstable();
        v
    }

    #[test]
    fn square_has_four_edges() {
        let vs = VertexSet::new(4, [set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3])]);
        let edges = geometric_edges(&vs);
        assert_eq!(edges.len(), 4);
        for i in 0..4 {
            for j in i + 1..4 {
                let cert = edge_certificate(&vs, i, j);
                assert!(cert.audit(&vs, i, j));
                assert_eq!(cert.is_edge(), edges.contains(&(i, j)));
            }
        }
        // diagonals {0,2}-{1,3} and {0,3}-{1,2}
        let d = vs.vertices.iter().position(|&u| u == set(&[0, 2])).unwrap();
        let e = vs.vertices.iter().position(|&u| u == set(&[1, 3])).unwrap();
        assert!(!edges.contains(&(d.min(e), d.max(e))));
    }

    #[test]
    fn octahedron_edges_match_exchanges() {
        let u = Matroid::uniform(4, 2).unwrap();
        let vs = vertices(&u);
        assert_eq!(vs.len(), 6);
        let ex = exchange_edges(&u);
        assert_eq!(ex.len(), 12);
        assert_eq!(sorted(geometric_edges(&vs)), ex);
    }

    #[test]
    fn two_points_one_edge() {
        let vs = VertexSet::new(2, [set(&[0]), set(&[1])]);
        assert_eq!(geometric_edges(&vs), vec![(0, 1)]);
        let single = VertexSet::new(2, [set(&[0])]);
        assert!(geometric_edges(&single).is_empty());
        assert!(ggms_check(&single).unwrap().passes());
    }

    #[test]
    fn pyramid_minus_base_vertex_fails_ggms() {
        let vs = VertexSet::new(
            4,
            [set(&[0, 1]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3])],
        );
        let verdict = ggms_check(&vs).unwrap();
        let v = verdict.violation.expect("diagonal edge");
        let pair = (vs.vertices[v.i], vs.vertices[v.j]);
        assert_eq!(pair, (set(&[1, 2]), set(&[0, 3])));
        assert!(v.certificate.audit(&vs, v.i, v.j));
    }

    #[test]
    fn ggms_rejects_unequal_cardinality() {
        let vs = VertexSet::new(3, [set(&[0]), set(&[1, 2])]);
        assert!(matches!(ggms_check(&vs), Err(PolytopeError::UnequalCardinality { .. })));
    }

    #[test]
    fn cut_of_octahedron() {
        let u = Matroid::uniform(4, 2).unwrap();
        let rep = cut_check(&u, set(&[2, 3])).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.cut_vertices, 5);
        assert_eq!(rep.exchange_neighbors.len(), 4);
        assert_eq!(rep.geometric_neighbors, rep.exchange_neighbors);
    }

    #[test]
    fn cut_of_single_vertex() {
        let u = Matroid::uniform(2, 2).unwrap();
        let rep = cut_check(&u, set(&[0, 1])).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.cut_vertices, 0);
        assert!(matches!(cut_check(&u, set(&[0])), Err(PolytopeError::Matroid(_))));
    }

    #[test]
    fn dot_output() {
        let u = Matroid::uniform(2, 1).unwrap();
        let dot = to_dot(&vertices(&u), &exchange_edges(&u), 1);
        assert!(dot.contains("v0 -- v1"));
        assert!(dot.contains("{1}"));
    }
}
