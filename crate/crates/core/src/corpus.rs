//! Small named matroids used throughout the tests and by the CLI.
//!
//! Ground sets are 0-based: the element written `i` in the usual 1-based
//! presentation is `i - 1` here.

use crate::matrix::{from_matrix, RationalMatrix};
use crate::matroid::{Basis, Matroid};
use crate::removal::SparsePavingChain;
use crate::set::ElemSet;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] =
    &["u24", "pyramid", "square", "u25", "u36", "u37", "nonfano", "fano", "matrix47"];

/// The seven lines of the Fano plane, in the order they are removed from
/// `U(3,7)`; the first six give the non-Fano matroid.
pub const FANO_LINES: [[usize; 3]; 7] =
    [[0, 1, 2], [2, 3, 4], [0, 4, 5], [1, 4, 6], [0, 3, 6], [2, 5, 6], [1, 3, 5]];

/// Rows of the rank-4 matrix on seven columns with dependent 4-sets
/// `{0,1,2,3}` and those containing `{3,4,5}`.
pub const MATRIX47: [[i64; 7]; 4] = [
    [1, 0, 0, 1, 0, 1, 5],
    [0, 0, 0, 0, 1, 1, 7],
    [1, 0, 1, 0, 0, 0, 3],
    [1, 1, 0, 0, 0, 0, -3],
];

fn set(e: &[usize]) -> ElemSet {
    ElemSet::from_elems(e.iter().copied())
}

pub fn fano_lines() -> Vec<Basis> {
    FANO_LINES.iter().map(|l| set(l)).collect()
}

/// The removal chain `U(3,7) -> ... -> Fano` following [`FANO_LINES`].
pub fn fano_chain() -> SparsePavingChain {
    SparsePavingChain { n: 7, r: 3, removed: fano_lines() }
}

/// `U(3,7) = M_0, M_1, .., M_7 = Fano`.
pub fn fano_chain_matroids() -> Vec<Matroid> {
    fano_chain().replay().expect("Fano chain replays")
}

/// `(M_{i-1}, b_i)` for each removal step of the Fano chain.
pub fn fano_chain_pairs() -> Vec<(Matroid, Basis)> {
    let ms = fano_chain_matroids();
    fano_lines().into_iter().enumerate().map(|(i, b)| (ms[i].clone(), b)).collect()
}

pub fn matrix47() -> RationalMatrix {
    RationalMatrix::from_integers(&MATRIX47.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
        .expect("rectangular")
}

/// The built-in matroid called `name`, or `None`.
pub fn builtin(name: &str) -> Option<Matroid> {
    let m = match name {
        "u24" => Matroid::uniform(4, 2).ok()?,
        // U(2,4) without {2,3}: the apex pair {0,1} is the top of the pyramid
        "pyramid" => Matroid::validate_bases(
            4,
            [set(&[0, 1]), set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3])],
        )
        .ok()?,
        "square" => {
            let u = Matroid::uniform(2, 1).ok()?;
            u.direct_sum(&u).ok()?
        }
        "u25" => Matroid::uniform(5, 2).ok()?,
        "u36" => Matroid::uniform(6, 3).ok()?,
        "u37" => Matroid::uniform(7, 3).ok()?,
        "nonfano" => fano_chain_matroids()[6].clone(),
        "fano" => fano_chain_matroids()[7].clone(),
        "matrix47" => from_matrix(&matrix47()).ok()?,
        _ => return None,
    };
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_counts() {
        let counts: Vec<usize> = BUILTIN_NAMES.iter().map(|n| builtin(n).unwrap().num_bases()).collect();
        assert_eq!(counts, vec![6, 5, 4, 10, 20, 35, 29, 28, 30]);
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn square_is_pyramid_minus_apex() {
        let p = builtin("pyramid").unwrap();
        let s = crate::removal::remove_basis(&p, set(&[0, 1])).unwrap();
        assert_eq!(s, builtin("square").unwrap());
    }
}
