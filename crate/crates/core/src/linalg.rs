//! Exact Gaussian elimination over k = F_q(s).

use alloc::vec;
use alloc::vec::Vec;

use crate::fq::Fq;
use crate::ratfn::RatFn;

/// Basis of the left nullspace of the matrix whose i-th row is
/// `rows[i]`: all w with Σ_i w_i·rows[i][j] = 0 for every column j.
/// Empty iff the rows are linearly independent. Deterministic: the
/// reduced echelon form fixes the basis.
pub fn left_nullspace(field: Fq, rows: &[Vec<RatFn>], ncols: usize) -> Vec<Vec<RatFn>> {
    // Work with the transpose problem: unknowns w_0..w_{n-1}, equations
    // indexed by columns.
    let n = rows.len();
    let mut mat: Vec<Vec<RatFn>> = (0..ncols)
        .map(|j| (0..n).map(|i| rows[i][j].clone()).collect())
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        // find pivot
        let Some(pr) = (row..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, pr);
        let inv = mat[row][col].inv().expect("nonzero pivot");
        for x in mat[row].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..mat.len() {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in 0..n {
                    let sub = mat[row][c].mul(&factor);
                    mat[r][c] = mat[r][c].sub(&sub);
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == mat.len() {
            break;
        }
    }

    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut w = vec![RatFn::zero(field); n];
        w[free] = RatFn::one(field);
        for col in 0..n {
            if let Some(pr) = pivot_of_col[col] {
                w[col] = mat[pr][free].neg();
            }
        }
        basis.push(w);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_ratfn;

    fn f2() -> Fq {
        Fq::prime(2).unwrap()
    }

    fn r(text: &str) -> RatFn {
        parse_ratfn(f2(), text).unwrap()
    }

    #[test]
    fn independent_rows_have_no_nullspace() {
        let rows = vec![vec![r("1"), r("0")], vec![r("0"), r("1")]];
        assert!(left_nullspace(f2(), &rows, 2).is_empty());
    }

    #[test]
    fn dependent_rows_yield_witness() {
        // row1 = (1, s), row2 = (s, s^2) = s·row1
        let rows = vec![vec![r("1"), r("s")], vec![r("s"), r("s^2")]];
        let ns = left_nullspace(f2(), &rows, 2);
        assert_eq!(ns.len(), 1);
        let w = &ns[0];
        for j in 0..2 {
            let mut acc = RatFn::zero(f2());
            for i in 0..2 {
                acc = acc.add(&w[i].mul(&rows[i][j]));
            }
            assert!(acc.is_zero());
        }
    }
}
