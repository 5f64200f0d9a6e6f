//! Small dense simplex for `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The slack basis is feasible, so no phase one is needed. Pivoting follows
//! Bland's rule, which cannot cycle on degenerate vertices. Intended for a
//! handful of rows and up to a few thousand columns.

use alloc::vec;
use alloc::vec::Vec;

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// Shadow price of each row, i.e. the dual solution.
    pub duals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("constraint matrix shape does not match b and c")]
    Shape,
    #[error("right-hand side must be non-negative and finite")]
    NegativeRhs,
}

/// Dense LP in inequality form. Rows of `a` have `c.len()` entries.
pub struct DenseLp {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl DenseLp {
    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        let m = self.b.len();
        let n = self.c.len();
        if self.a.len() != m || self.a.iter().any(|row| row.len() != n) {
            return Err(LpError::Shape);
        }
        if self.b.iter().any(|&b| !(b >= 0.0 && b.is_finite())) {
            return Err(LpError::NegativeRhs);
        }
        let width = n + m + 1;
        // Row 0 is the objective row (reduced costs, value in the last column).
        let mut tab = vec![vec![0.0; width]; m + 1];
        for (j, &cj) in self.c.iter().enumerate() {
            tab[0][j] = -cj;
        }
        for i in 0..m {
            tab[i + 1][..n].copy_from_slice(&self.a[i]);
            tab[i + 1][n + i] = 1.0;
            tab[i + 1][width - 1] = self.b[i];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        // Bland: smallest index with a negative reduced cost enters.
        while let Some(enter) = (0..n + m).find(|&j| tab[0][j] < -PIVOT_TOL) {
            // Ratio test; ties go to the smallest basic index.
            let mut leave: Option<(usize, f64)> = None;
            for i in 1..=m {
                let a = tab[i][enter];
                if a > PIVOT_TOL {
                    let ratio = tab[i][width - 1] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            if ratio < best - PIVOT_TOL
                                || (ratio <= best + PIVOT_TOL && basis[i - 1] < basis[r - 1])
                            {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Ok(LpOutcome::Unbounded);
            };
            pivot(&mut tab, row, enter);
            basis[row - 1] = enter;
        }

        let mut x = vec![0.0; n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = tab[i + 1][width - 1];
            }
        }
        let duals = (0..m).map(|i| tab[0][n + i]).collect();
        Ok(LpOutcome::Optimal(LpSolution {
            value: tab[0][width - 1],
            x,
            duals,
        }))
    }
}

fn pivot(tab: &mut [Vec<f64>], row: usize, col: usize) {
    let p = tab[row][col];
    for v in tab[row].iter_mut() {
        *v /= p;
    }
    tab[row][col] = 1.0;
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let factor = r[col];
        if factor != 0.0 {
            for (v, &pv) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            r[col] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  →  36 at (2, 6)
        let lp = DenseLp {
            a: vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            b: vec![4.0, 12.0, 18.0],
            c: vec![3.0, 5.0],
        };
        let LpOutcome::Optimal(sol) = lp.solve().unwrap() else {
            panic!("expected optimum")
        };
        assert!((sol.value - 36.0).abs() < 1e-12);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 6.0).abs() < 1e-12);
        // Dual: (0, 1.5, 1); strong duality b·y = 36.
        let dual_obj: f64 = sol.duals.iter().zip(&lp.b).map(|(y, b)| y * b).sum();
        assert!((dual_obj - 36.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let lp = DenseLp {
            a: vec![vec![1.0, -1.0]],
            b: vec![1.0],
            c: vec![0.0, 1.0],
        };
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_zero_rhs_terminates() {
        // Classic cycling example (Beale) under Dantzig's rule.
        let lp = DenseLp {
            a: vec![
                vec![0.25, -8.0, -1.0, 9.0],
                vec![0.5, -12.0, -0.5, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            b: vec![0.0, 0.0, 1.0],
            c: vec![0.75, -20.0, 0.5, -6.0],
        };
        let LpOutcome::Optimal(sol) = lp.solve().unwrap() else {
            panic!("expected optimum")
        };
        assert!((sol.value - 1.25).abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let lp = DenseLp {
            a: vec![vec![1.0]],
            b: vec![-1.0],
            c: vec![1.0],
        };
        assert_eq!(lp.solve(), Err(LpError::NegativeRhs));
        let lp = DenseLp {
            a: vec![vec![1.0, 2.0]],
            b: vec![1.0],
            c: vec![1.0],
        };
        assert_eq!(lp.solve(), Err(LpError::Shape));
    }
}
