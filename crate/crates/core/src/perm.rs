use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{shape, Error, Result};
use crate::field::Field;
use crate::vector::FVector;

/// Permutation matrix `P` with `P[σ(i)][i] = 1`, so `(P x)[σ(i)] = x[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    forward: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.forward
    }
}

impl Permutation {
    pub fn new(forward: Vec<u32>) -> Result<Self> {
        let n = forward.len();
        let mut seen = vec![false; n];
        for &s in &forward {
            let s = s as usize;
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::BadPermutation(format!(
                    "{s} repeated or out of range for size {n}"
                )));
            }
        }
        Ok(Self { forward })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n as u32).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut forward: Vec<u32> = (0..n as u32).collect();
        forward.shuffle(rng);
        Self { forward }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &s) in self.forward.iter().enumerate() {
            inv[s as usize] = i as u32;
        }
        Self { forward: inv }
    }

    /// `P x` on a raw slice.
    pub fn apply_slice<T: Copy + Default>(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); x.len()];
        for (i, &s) in self.forward.iter().enumerate() {
            out[s as usize] = x[i];
        }
        out
    }

    pub fn apply(&self, v: &FVector) -> Result<FVector> {
        if v.len() != self.len() {
            return Err(shape("permutation size differs from vector length"));
        }
        Ok(FVector::from_reduced(
            v.field(),
            self.apply_slice(v.as_slice()),
        ))
    }

    pub fn apply_inverse(&self, v: &FVector) -> Result<FVector> {
        if v.len() != self.len() {
            return Err(shape("permutation size differs from vector length"));
        }
        let x = v.as_slice();
        let out = self.forward.iter().map(|&s| x[s as usize]).collect();
        Ok(FVector::from_reduced(v.field(), out))
    }

    pub fn to_dense(&self, field: Field) -> DenseMatrix {
        let n = self.len();
        let mut m = DenseMatrix::zeros(field, n, n);
        for (i, &s) in self.forward.iter().enumerate() {
            m.set(s as usize, i, 1).expect("1 is reduced");
        }
        m
    }

    /// `P X`: row i of X becomes row σ(i).
    pub fn permute_rows(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.rows() != self.len() {
            return Err(shape("permutation size differs from row count"));
        }
        let mut data = vec![0u32; x.rows() * x.cols()];
        let c = x.cols();
        for (i, &s) in self.forward.iter().enumerate() {
            data[s as usize * c..(s as usize + 1) * c].copy_from_slice(x.row(i));
        }
        Ok(DenseMatrix::from_reduced(x.field(), x.rows(), c, data))
    }

    /// `X P`: column σ(j) of X becomes column j.
    pub fn permute_cols_right(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.cols() != self.len() {
            return Err(shape("permutation size differs from column count"));
        }
        let c = x.cols();
        let mut data = Vec::with_capacity(x.rows() * c);
        for r in 0..x.rows() {
            let row = x.row(r);
            data.extend(self.forward.iter().map(|&s| row[s as usize]));
        }
        Ok(DenseMatrix::from_reduced(x.field(), x.rows(), c, data))
    }
}

/// Diagonal matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FDiagonal {
    field: Field,
    entries: Vec<u32>,
}

impl FDiagonal {
    pub fn new(field: Field, entries: Vec<u32>) -> Result<Self> {
        for &x in &entries {
            field.check(x)?;
        }
        Ok(Self { field, entries })
    }

    /// Entries uniform on F_p \ {0}.
    pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Self {
        Self {
            field,
            entries: (0..n).map(|_| field.random_nonzero(rng)).collect(),
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn inverse(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|&d| self.field.inv(d))
            .collect::<Result<_>>()?;
        Ok(Self {
            field: self.field,
            entries,
        })
    }

    /// `D X`
    pub fn scale_rows(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.rows() != self.len() {
            return Err(shape("diagonal size differs from row count"));
        }
        let f = self.field;
        let mut data = Vec::with_capacity(x.rows() * x.cols());
        for (r, &d) in self.entries.iter().enumerate() {
            data.extend(x.row(r).iter().map(|&v| f.mul(d, v)));
        }
        Ok(DenseMatrix::from_reduced(f, x.rows(), x.cols(), data))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.len();
        let mut m = DenseMatrix::zeros(self.field, n, n);
        for (i, &d) in self.entries.iter().enumerate() {
            m.set(i, i, d).expect("reduced");
        }
        m
    }
}
