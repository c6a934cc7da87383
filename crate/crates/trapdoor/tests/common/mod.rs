#![allow(dead_code)]

use tdm_core::{DenseMatrix, Field};

/// Triple-loop product over F_p, independent of the library kernels.
pub fn naive_matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let p = a.field().modulus() as u64;
    let (n, m, k) = (a.rows(), b.cols(), a.cols());
    let mut out = vec![0u32; n * m];
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0u64;
            for t in 0..k {
                acc = (acc + a.get(i, t) as u64 * b.get(t, j) as u64) % p;
            }
            out[i * m + j] = acc as u32;
        }
    }
    DenseMatrix::new(a.field(), n, m, out).unwrap()
}

pub fn naive_matvec(a: &DenseMatrix, v: &[u32]) -> Vec<u32> {
    let p = a.field().modulus() as u64;
    (0..a.rows())
        .map(|i| {
            (0..a.cols()).fold(0u64, |acc, j| (acc + a.get(i, j) as u64 * v[j] as u64) % p) as u32
        })
        .collect()
}

pub fn naive_add(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let p = a.field().modulus();
    let data = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| (x + y) % p)
        .collect();
    DenseMatrix::new(a.field(), a.rows(), a.cols(), data).unwrap()
}

/// Rank by elimination on plain integers mod p.
#[allow(clippy::needless_range_loop)]
pub fn naive_rank(a: &DenseMatrix) -> usize {
    let p = a.field().modulus() as u64;
    let (n, m) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|r| a.row(r).iter().map(|&x| x as u64).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m {
        let Some(piv) = (rank..n).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c], p - 2, p);
        for r in 0..n {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for cc in c..m {
                    rows[r][cc] = (rows[r][cc] + p * p - f * rows[rank][cc]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `prod_{i=1..n} (1 - p^-i)`, the chance a uniform n x n matrix is invertible.
pub fn full_rank_rate(p: u32, n: usize) -> f64 {
    (1..=n)
        .map(|i| 1.0 - (p as f64).powi(-(i as i32)))
        .product()
}

pub fn f(p: u64) -> Field {
    Field::new(p).unwrap()
}
