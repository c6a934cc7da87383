//! Cubic-time Gaussian elimination oracles used to check everything else.

use crate::dense::DenseMatrix;
use crate::error::{shape, Error, Result};
use crate::field::Field;
use crate::vector::FVector;

pub fn product(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.matmul(b)
}

/// Reduces `m` in place to row echelon form; returns the pivot columns and
/// the number of row swaps.
fn echelon(m: &mut DenseMatrix, max_col: usize) -> (Vec<usize>, usize) {
    let f = m.field();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut row = 0;
    for col in 0..max_col {
        if row == m.rows() {
            break;
        }
        let Some(pr) = (row..m.rows()).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        if pr != row {
            m.swap_rows(pr, row);
            swaps += 1;
        }
        let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
        let pivot_row: Vec<u32> = m.row(row).to_vec();
        for r in row + 1..m.rows() {
            let x = m.get(r, col);
            if x != 0 {
                let factor = f.neg(f.mul(x, inv));
                f.axpy(m.row_mut(r), factor, &pivot_row);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (pivots, swaps)
}

pub fn rank(a: &DenseMatrix) -> usize {
    let mut m = a.clone();
    let cols = m.cols();
    echelon(&mut m, cols).0.len()
}

pub fn determinant(a: &DenseMatrix) -> Result<u32> {
    if !a.is_square() {
        return Err(shape("determinant of a non-square matrix"));
    }
    let f = a.field();
    let n = a.rows();
    let mut m = a.clone();
    let (pivots, swaps) = echelon(&mut m, n);
    if pivots.len() < n {
        return Ok(0);
    }
    let mut det = 1 % f.modulus();
    for i in 0..n {
        det = f.mul(det, m.get(i, i));
    }
    Ok(if swaps % 2 == 1 { f.neg(det) } else { det })
}

/// Gauss-Jordan on `[A | rhs]`; fails with `Singular` unless `A` is invertible.
fn solve_many(a: &DenseMatrix, rhs: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() || rhs.rows() != a.rows() {
        return Err(shape("solve needs square A with matching right-hand side"));
    }
    let f: Field = a.field();
    f.ensure_same(&rhs.field())?;
    let n = a.rows();
    let mut aug = DenseMatrix::hstack(f, &[a.clone(), rhs.clone()])?;
    let (pivots, _) = echelon(&mut aug, n);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    for col in (0..n).rev() {
        let inv = f.inv(aug.get(col, col))?;
        let scaled: Vec<u32> = aug.row(col).iter().map(|&x| f.mul(x, inv)).collect();
        aug.row_mut(col).copy_from_slice(&scaled);
        for r in 0..col {
            let x = aug.get(r, col);
            if x != 0 {
                f.axpy(aug.row_mut(r), f.neg(x), &scaled);
            }
        }
    }
    aug.submatrix(0, n, n, rhs.cols())
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    solve_many(a, &DenseMatrix::identity(a.field(), a.rows()))
}

pub fn solve(a: &DenseMatrix, b: &FVector) -> Result<FVector> {
    let rhs = DenseMatrix::from_columns(a.field(), b.len(), std::slice::from_ref(b))?;
    Ok(solve_many(a, &rhs)?.column(0))
}

pub fn is_invertible(a: &DenseMatrix) -> bool {
    a.is_square() && rank(a) == a.rows()
}

/// `Π_{i=1..n} (1 - p^{-i})`: probability a uniform n x n matrix over F_p is
/// invertible.
pub fn invertible_probability(p: u32, n: usize) -> f64 {
    (1..=n)
        .map(|i| 1.0 - (p as f64).powi(-(i as i32)))
        .product()
}
