//! Exact rational matrices and the column matroids they represent.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matroid::{Matroid, MatroidError};
use crate::set::{k_subsets, MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
}

/// An `rows x cols` matrix of reduced rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape { expected: rows * cols, found: entries.len() });
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MatrixError::Shape { expected: cols, found: row.len() });
            }
            entries.extend(row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))));
        }
        Ok(RationalMatrix { rows: rows.len(), cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        RationalMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    /// Parses the text format: a header line `r n` followed by `r` lines of
    /// `n` whitespace-separated integers or `p/q` rationals. Blank lines and
    /// `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or(MatrixError::Parse { line: 1, msg: "missing header `r n`".into() })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| MatrixError::Parse { line: hline, msg: format!("bad dimension {s:?}: {e}") })
        };
        if dims.len() != 2 {
            return Err(MatrixError::Parse { line: hline, msg: "header must be `r n`".into() });
        }
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (line, body) = lines.next().ok_or(MatrixError::Parse {
                line: hline,
                msg: format!("expected {rows} matrix rows"),
            })?;
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() != cols {
                return Err(MatrixError::Parse {
                    line,
                    msg: format!("expected {cols} entries, found {}", toks.len()),
                });
            }
            for tok in toks {
                entries.push(parse_rational(tok).map_err(|msg| MatrixError::Parse { line, msg })?);
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(MatrixError::Parse { line, msg: "trailing content after matrix".into() });
        }
        RationalMatrix::new(rows, cols, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                entries.push(acc);
            }
        }
        RationalMatrix { rows: self.rows, cols: other.cols, entries }
    }

    /// Rows scaled by the lcm of their denominators. Row scaling leaves the
    /// column matroid unchanged.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        bareiss_rank(self.integer_rows())
    }

    /// Rank of the submatrix on the given columns.
    pub fn column_rank(&self, columns: &[usize]) -> usize {
        let ints = self.integer_rows();
        bareiss_rank(
            ints.iter()
                .map(|row| columns.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        )
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn parse_rational(tok: &str) -> Result<BigRational, String> {
    let (num, den) = match tok.split_once('/') {
        Some((p, q)) => (p, q),
        None => (tok, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {tok:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {tok:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {tok:?}"));
    }
    Ok(BigRational::new(num, den))
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// After `k` pivots every remaining entry equals a `(k+1)`-minor of the input,
/// so each division by the previous pivot is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m {
            for j in col + 1..n {
                let v = &a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Column matroid of `a`: bases are the `rows`-subsets of columns of full rank.
pub fn from_matrix(a: &RationalMatrix) -> Result<Matroid, MatroidError> {
    let (r, n) = (a.rows(), a.cols());
    if n > MAX_ELEMENTS {
        return Err(MatroidError::GroundSetTooLarge(n));
    }
    let ints = a.integer_rows();
    let mut bases = Vec::new();
    for cols in k_subsets(n, r) {
        let sub: Vec<Vec<BigInt>> = ints
            .iter()
            .map(|row| cols.iter().map(|j| row[j].clone()).collect())
            .collect();
        if bareiss_rank(sub) == r {
            bases.push(cols);
        }
    }
    if bases.is_empty() {
        return Err(MatroidError::RankDeficient { rank: bareiss_rank(ints), rows: r });
    }
    bases.sort_unstable();
    Ok(Matroid::from_sorted_unchecked(n, r, bases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::ElemSet;

    /// Rank by plain Gaussian elimination over the rationals.
    fn rational_rank(a: &RationalMatrix) -> usize {
        let mut m: Vec<Vec<BigRational>> = (0..a.rows())
            .map(|i| (0..a.cols()).map(|j| a.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..a.cols() {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[rank][col];
                    #[allow(clippy::needless_range_loop)]
                    for j in col..a.cols() {
                        let d = &f * &m[rank][j];
                        m[i][j] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn parses_integers_and_fractions() {
        let a = RationalMatrix::parse("2 3\n1 -2/4 0\n# comment\n3/1 0 7\n").unwrap();
        assert_eq!((a.rows(), a.cols()), (2, 3));
        assert_eq!(a.get(0, 1), &BigRational::new((-1).into(), 2.into()));
        let again = RationalMatrix::parse(&a.to_text()).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(RationalMatrix::parse(""), Err(MatrixError::Parse { .. })));
        assert!(matches!(
            RationalMatrix::parse("1 2\n1 1/0\n"),
            Err(MatrixError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            RationalMatrix::parse("2 2\n1 1\n"),
            Err(MatrixError::Parse { .. })
        ));
        assert!(matches!(
            RationalMatrix::parse("1 2\n1 1 1\n"),
            Err(MatrixError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn bareiss_matches_rational_elimination() {
        let cases = [
            vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 2]],
            vec![vec![2, -3, 5, 7], vec![4, -6, 10, 14], vec![0, 1, 1, 0], vec![1, 1, 1, 1]],
            vec![vec![0]],
        ];
        for rows in cases {
            let a = RationalMatrix::from_integers(&rows).unwrap();
            assert_eq!(a.rank(), rational_rank(&a), "{rows:?}");
        }
    }

    #[test]
    fn identity_gives_single_basis() {
        let m = from_matrix(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(m.bases(), &[ElemSet::from_elems([0, 1])][..]);
    }

    #[test]
    fn zero_matrix_is_rank_deficient() {
        let a = RationalMatrix::from_integers(&[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(from_matrix(&a).unwrap_err(), MatroidError::RankDeficient { rank: 1, rows: 2 });
    }
}
