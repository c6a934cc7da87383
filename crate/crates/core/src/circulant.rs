//! Circulant matrix-vector products.
//!
//! The `b x b` circulant generated by `first_row = c` has entries
//! `C[i][j] = c[(j - i) mod b]`, so `(C v)[i] = Σ_k c[k] v[(i + k) mod b]`.
//! Reversing `c` turns this into a cyclic convolution, computed with a
//! radix-2 NTT when `b` is a power of two and `p ≡ 1 (mod 2b)`, and with
//! Karatsuba otherwise.

use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{shape, Result};
use crate::field::Field;
use crate::ops::OpCount;
use crate::vector::FVector;

const SCHOOLBOOK_CUTOFF: usize = 32;

/// Twiddle tables for a length-`size` cyclic NTT over F_p.
#[derive(Debug)]
pub struct NttTable {
    field: Field,
    size: usize,
    log_size: u32,
    roots: Vec<u32>,
    inv_roots: Vec<u32>,
    size_inv: u32,
}

impl NttTable {
    /// `None` unless `size` is a power of two and `p ≡ 1 (mod 2·size)`.
    pub fn new(field: Field, size: usize) -> Option<Self> {
        let p = field.modulus() as u64;
        if size == 0 || !size.is_power_of_two() || (p - 1) % (2 * size as u64) != 0 {
            return None;
        }
        let g = field.primitive_root();
        let omega = field.pow(g, (p - 1) / size as u64);
        let omega_inv = field.inv(omega).ok()?;
        let half = size / 2;
        let mut roots = Vec::with_capacity(half);
        let mut inv_roots = Vec::with_capacity(half);
        let (mut w, mut wi) = (1u32, 1u32);
        for _ in 0..half {
            roots.push(w);
            inv_roots.push(wi);
            w = field.mul(w, omega);
            wi = field.mul(wi, omega_inv);
        }
        Some(Self {
            field,
            size,
            log_size: size.trailing_zeros(),
            roots,
            inv_roots,
            size_inv: field.inv(field.reduce(size as u64)).ok()?,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn bit_reverse(&self, a: &mut [u32]) {
        let n = self.size;
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
    }

    fn transform(&self, a: &mut [u32], roots: &[u32], ops: &mut OpCount) {
        debug_assert_eq!(a.len(), self.size);
        let f = self.field;
        self.bit_reverse(a);
        let mut len = 2;
        while len <= self.size {
            let step = self.size / len;
            for start in (0..self.size).step_by(len) {
                for k in 0..len / 2 {
                    let w = roots[k * step];
                    let u = a[start + k];
                    let v = f.mul(a[start + k + len / 2], w);
                    a[start + k] = f.add(u, v);
                    a[start + k + len / 2] = f.sub(u, v);
                }
            }
            len <<= 1;
        }
        let butterflies = (self.size / 2) as u64 * self.log_size as u64;
        ops.muls += butterflies;
        ops.adds += 2 * butterflies;
    }

    pub fn forward(&self, a: &mut [u32], ops: &mut OpCount) {
        self.transform(a, &self.roots, ops);
    }

    pub fn inverse(&self, a: &mut [u32], ops: &mut OpCount) {
        self.transform(a, &self.inv_roots, ops);
        for x in a.iter_mut() {
            *x = self.field.mul(*x, self.size_inv);
        }
        ops.muls += self.size as u64;
    }
}

#[derive(Debug, Clone)]
enum Plan {
    /// NTT of the reversed first row.
    Ntt {
        table: Arc<NttTable>,
        spectrum: Vec<u32>,
    },
    Karatsuba {
        reversed: Vec<u32>,
    },
}

/// A circulant block with its multiplication plan precomputed.
#[derive(Debug, Clone)]
pub struct Circulant {
    field: Field,
    first_row: Vec<u32>,
    plan: Plan,
}

fn reversed_row(first_row: &[u32]) -> Vec<u32> {
    let b = first_row.len();
    (0..b).map(|m| first_row[(b - m) % b]).collect()
}

impl Circulant {
    pub fn new(field: Field, first_row: Vec<u32>) -> Result<Self> {
        for &x in &first_row {
            field.check(x)?;
        }
        let table = NttTable::new(field, first_row.len()).map(Arc::new);
        Ok(Self::with_table(field, first_row, table))
    }

    /// Reuses a shared table when its size matches the block.
    pub fn with_table(field: Field, first_row: Vec<u32>, table: Option<Arc<NttTable>>) -> Self {
        let reversed = reversed_row(&first_row);
        let plan = match table {
            Some(table) if table.size() == first_row.len() => {
                let mut spectrum = reversed;
                table.forward(&mut spectrum, &mut OpCount::default());
                Plan::Ntt { table, spectrum }
            }
            _ => Plan::Karatsuba { reversed },
        };
        Self {
            field,
            first_row,
            plan,
        }
    }

    pub fn size(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[u32] {
        &self.first_row
    }

    pub fn uses_ntt(&self) -> bool {
        matches!(self.plan, Plan::Ntt { .. })
    }

    /// Frequency-domain representation when the NTT path is active.
    pub fn spectrum(&self) -> Option<&[u32]> {
        match &self.plan {
            Plan::Ntt { spectrum, .. } => Some(spectrum),
            Plan::Karatsuba { .. } => None,
        }
    }

    pub fn apply_slice(&self, v: &[u32], ops: &mut OpCount) -> Vec<u32> {
        let f = self.field;
        match &self.plan {
            Plan::Ntt { table, spectrum } => {
                let mut a = v.to_vec();
                table.forward(&mut a, ops);
                for (x, &s) in a.iter_mut().zip(spectrum) {
                    *x = f.mul(*x, s);
                }
                ops.muls += a.len() as u64;
                table.inverse(&mut a, ops);
                a
            }
            Plan::Karatsuba { reversed } => cyclic_convolution(f, reversed, v, ops),
        }
    }

    pub fn apply(&self, v: &FVector) -> Result<FVector> {
        self.field.ensure_same(&v.field())?;
        if v.len() != self.size() {
            return Err(shape(format!(
                "circulant of size {} times length-{} vector",
                self.size(),
                v.len()
            )));
        }
        Ok(FVector::from_reduced(
            self.field,
            self.apply_slice(v.as_slice(), &mut OpCount::default()),
        ))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let b = self.size();
        DenseMatrix::from_fn(self.field, b, b, |i, j| {
            self.first_row[(j + b - i) % b] as u64
        })
    }
}

/// `C v` for the circulant generated by `first_row`.
pub fn circulant_matvec(first_row: &FVector, v: &FVector) -> Result<FVector> {
    if first_row.len() != v.len() {
        return Err(shape("first row and vector lengths differ"));
    }
    Circulant::new(first_row.field(), first_row.as_slice().to_vec())?.apply(v)
}

/// Length-b cyclic convolution via a Karatsuba linear product and folding.
pub fn cyclic_convolution(f: Field, a: &[u32], b: &[u32], ops: &mut OpCount) -> Vec<u32> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n == 0 {
        return Vec::new();
    }
    let lin = karatsuba(f, a, b, ops);
    let mut out = lin[..n].to_vec();
    for (i, &x) in lin[n..].iter().enumerate() {
        out[i] = f.add(out[i], x);
    }
    ops.adds += (n - 1) as u64;
    out
}

/// Linear product of two equal-length polynomials, length `2n - 1`.
pub fn karatsuba(f: Field, a: &[u32], b: &[u32], ops: &mut OpCount) -> Vec<u32> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n == 0 {
        return Vec::new();
    }
    if n <= SCHOOLBOOK_CUTOFF {
        let mut acc = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += f.mul(x, y) as u64;
            }
        }
        ops.muladds(n * n);
        return acc.into_iter().map(|x| f.reduce(x)).collect();
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(f, a0, b0, ops);
    let z2 = karatsuba(f, a1, b1, ops);
    let hi = n - h;
    let mut sa = a1.to_vec();
    let mut sb = b1.to_vec();
    for i in 0..h {
        sa[i] = f.add(sa[i], a0[i]);
        sb[i] = f.add(sb[i], b0[i]);
    }
    ops.adds += 2 * h as u64;
    let mut z1 = karatsuba(f, &sa, &sb, ops);
    for (i, &x) in z0.iter().enumerate() {
        z1[i] = f.sub(z1[i], x);
    }
    for (i, &x) in z2.iter().enumerate() {
        z1[i] = f.sub(z1[i], x);
    }
    ops.adds += (z0.len() + z2.len()) as u64;
    debug_assert_eq!(z1.len(), 2 * hi - 1);
    let mut out = vec![0u32; 2 * n - 1];
    out[..z0.len()].copy_from_slice(&z0);
    for (i, &x) in z2.iter().enumerate() {
        out[2 * h + i] = f.add(out[2 * h + i], x);
    }
    for (i, &x) in z1.iter().enumerate() {
        out[h + i] = f.add(out[h + i], x);
    }
    ops.adds += (z1.len() + z2.len()) as u64;
    out
}
