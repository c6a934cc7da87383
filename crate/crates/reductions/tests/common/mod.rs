#![allow(dead_code)]

use tdm_core::{DenseMatrix, Field};

pub fn f(p: u64) -> Field {
    Field::new(p).unwrap()
}

pub fn naive_matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let p = a.field().modulus() as u64;
    DenseMatrix::from_fn(a.field(), a.rows(), b.cols(), |i, j| {
        (0..a.cols())
            .map(|k| a.get(i, k) as u64 * b.get(k, j) as u64 % p)
            .sum::<u64>()
            % p
    })
}

pub fn naive_matvec(a: &DenseMatrix, x: &[u32]) -> Vec<u32> {
    let p = a.field().modulus() as u64;
    (0..a.rows())
        .map(|i| {
            ((0..a.cols())
                .map(|k| a.get(i, k) as u64 * x[k] as u64 % p)
                .sum::<u64>()
                % p) as u32
        })
        .collect()
}

pub fn all_ones(field: Field, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(field, n, n, |_, _| 1)
}

/// Ones on and above the diagonal, `d` in the corner: determinant `d`.
pub fn upper_ones(field: Field, n: usize, d: u64) -> DenseMatrix {
    DenseMatrix::from_fn(field, n, n, |i, j| {
        if i == 0 && j == 0 {
            d
        } else {
            (j >= i) as u64
        }
    })
}

/// Rows 0 and 1 equal: singular, although most other rows are generic.
pub fn repeated_row(field: Field, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(field, n, n, |i, j| {
        let i = i.max(1) as u64;
        (i * i + 3 * j as u64 * i + j as u64) % 7 + (j as u64 == i) as u64
    })
}
