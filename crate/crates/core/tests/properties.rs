use matroid_exchange::matrix::{bareiss_rank, from_matrix, RationalMatrix};
use matroid_exchange::removal::{is_removable, remove_basis};
use matroid_exchange::{ElemSet, Matroid};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, cols), rows)
}

fn matroid_of(rows: &[Vec<i64>]) -> Matroid {
    from_matrix(&RationalMatrix::from_integers(rows).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Left multiplication by an invertible matrix preserves column dependencies.
    #[test]
    fn row_operations_preserve_the_matroid(a in small_matrix(3, 6), u in small_matrix(3, 3)) {
        let ints: Vec<Vec<BigInt>> = u.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        prop_assume!(bareiss_rank(ints) == 3);
        let am = RationalMatrix::from_integers(&a).unwrap();
        let um = RationalMatrix::from_integers(&u).unwrap();
        prop_assert_eq!(from_matrix(&um.mul(&am)).unwrap(), from_matrix(&am).unwrap());
    }

    /// Represented families pass validation and admit symmetric exchanges.
    #[test]
    fn represented_matroids_satisfy_exchange(a in small_matrix(3, 6)) {
        let m = matroid_of(&a);
        let again = Matroid::validate_bases(m.n(), m.bases().iter().copied()).unwrap();
        prop_assert_eq!(&again, &m);
        for &b1 in m.bases() {
            for &b2 in m.bases() {
                for x in b1.difference(b2) {
                    let y = m.symmetric_partner(b1, b2, x);
                    prop_assert!(y.is_some());
                    let y = y.unwrap();
                    prop_assert!(m.is_basis(b1.exchange(x, y)) && m.is_basis(b2.exchange(y, x)));
                }
            }
        }
    }

    /// The fundamental circuit of `x` over `b` is `x` plus the elements of
    /// `b` that `x` can replace.
    #[test]
    fn fundamental_circuit_matches_exchanges(a in small_matrix(3, 6)) {
        let m = matroid_of(&a);
        let loops = m.loops();
        for &b in m.bases() {
            for x in loops {
                prop_assert!(m.fundamental_circuit(b, x).is_err());
            }
            for x in m.ground().difference(b).difference(loops) {
                let expected = b
                    .iter()
                    .filter(|&y| m.is_basis(b.exchange(y, x)))
                    .fold(ElemSet::singleton(x), |s, y| s.with(y));
                let c = m.fundamental_circuit(b, x).unwrap();
                prop_assert_eq!(c, expected);
                prop_assert!(m.is_circuit(c));
            }
        }
    }

    #[test]
    fn dual_is_an_involution(a in small_matrix(3, 6)) {
        let m = matroid_of(&a);
        let d = m.dual();
        prop_assert_eq!(d.num_bases(), m.num_bases());
        prop_assert!(m.bases().iter().all(|&b| d.is_basis(m.ground().difference(b))));
        prop_assert_eq!(d.dual(), m);
    }

    /// Whenever removal is allowed the remaining family is again a matroid.
    #[test]
    fn removal_yields_matroids(a in small_matrix(3, 6)) {
        let m = matroid_of(&a);
        prop_assume!(!m.has_loops_or_coloops() && m.num_bases() > 1);
        for &b in m.bases() {
            let cert = is_removable(&m, b).unwrap();
            prop_assert!(cert.audit(&m));
            let removed = remove_basis(&m, b);
            prop_assert_eq!(removed.is_ok(), cert.removable());
        }
    }
}
