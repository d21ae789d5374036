//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `max c·x` subject to `A x = b`, `x >= 0` and reports a dual vector
//! `y` with `Aᵀy >= c` and `b·y = c·x` at optimality, so every answer can be
//! re-checked with exact arithmetic.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, y: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    /// Columns that may enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        self.rows[i].last().expect("tableau row has a right-hand side")
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs simplex iterations for `max cost·x` from the current feasible
    /// basis. Returns `false` if the objective is unbounded.
    fn optimize(&mut self, cost: &[BigRational]) -> bool {
        let ncols = cost.len();
        loop {
            // Bland: first improving column
            let entering = (0..ncols).find(|&j| {
                if !self.allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    if !cost[bj].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[bj] * &self.rows[i][j];
                    }
                }
                d.is_positive()
            });
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, col);
        }
    }
}

/// Maximises `c·x` subject to `a x = b`, `x >= 0`.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));

    // Row signs so that every right-hand side is non-negative.
    let sign: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = if sign[i] { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = BigRational::from_integer(1.into());
        row[width - 1] = if sign[i] { -b[i].clone() } else { b[i].clone() };
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), allowed: vec![true; n + m] };

    // Phase 1: maximise minus the sum of artificials.
    let mut phase1 = vec![BigRational::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = BigRational::from_integer((-1).into());
    }
    t.optimize(&phase1);
    if (0..m).any(|i| t.basis[i] >= n && !t.rhs(i).is_zero()) {
        return LpOutcome::Infeasible;
    }
    // Drive zero-valued artificials out where possible; rows where that fails
    // are redundant and keep their artificial at zero.
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero() && !t.basis.contains(&j)) {
                t.pivot(i, j);
            }
        }
    }
    for j in n..n + m {
        t.allowed[j] = false;
    }

    let mut phase2 = vec![BigRational::zero(); n + m];
    phase2[..n].clone_from_slice(c);
    if !t.optimize(&phase2) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rhs(i).clone();
        }
    }
    // y' = c_B B^-1, read off the artificial columns; undo the row flips.
    let mut y = vec![BigRational::zero(); m];
    for (k, yk) in y.iter_mut().enumerate() {
        let mut acc = BigRational::zero();
        for (i, &bj) in t.basis.iter().enumerate() {
            if bj < n && !c[bj].is_zero() {
                acc += &c[bj] * &t.rows[i][n + k];
            }
        }
        *yk = if sign[k] { -acc } else { acc };
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, y, value }
}

/// Exact re-check of an optimal primal/dual pair.
pub fn audit_optimal(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
    x: &[BigRational],
    y: &[BigRational],
) -> bool {
    let primal_ok = x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, bi)| {
            row.iter().zip(x).map(|(aij, xj)| aij * xj).sum::<BigRational>() == *bi
        });
    let dual_ok = (0..c.len()).all(|j| {
        let col: BigRational = a.iter().zip(y).map(|(row, yi)| &row[j] * yi).sum();
        col >= c[j]
    });
    let cx: BigRational = c.iter().zip(x).map(|(ci, xi)| ci * xi).sum();
    let by: BigRational = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
    primal_ok && dual_ok && cx == by
}
