use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{shape, Error, Result};
use crate::field::Field;
use crate::ops::OpCount;
use crate::vector::FVector;

/// Row-major dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DenseRepr")]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

#[derive(Deserialize)]
struct DenseRepr {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl TryFrom<DenseRepr> for DenseMatrix {
    type Error = Error;

    fn try_from(r: DenseRepr) -> Result<Self> {
        DenseMatrix::new(r.field, r.rows, r.cols, r.data)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "DenseMatrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        if self.rows * self.cols <= 256 {
            for r in 0..self.rows {
                writeln!(f, "  {:?}", self.row(r))?;
            }
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Caller guarantees `data` has `rows * cols` reduced entries.
    pub fn from_reduced(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < field.modulus()));
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: Field, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(shape("ragged rows"));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(field.reduce(f(r, c)));
            }
        }
        Self::from_reduced(field, rows, cols, data)
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[FVector]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(shape("column length differs from row count"));
        }
        let cols = columns.len();
        let mut data = vec![0; rows * cols];
        for (c, col) in columns.iter().enumerate() {
            field.ensure_same(&col.field())?;
            for (r, &x) in col.as_slice().iter().enumerate() {
                data[r * cols + c] = x;
            }
        }
        Ok(Self::from_reduced(field, rows, cols, data))
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self::from_reduced(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self::from_reduced(field, rows, cols, data)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u32) -> Result<()> {
        self.data[r * self.cols + c] = self.field.check(value)?;
        Ok(())
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FVector {
        FVector::from_reduced(self.field, self.row(r).to_vec())
    }

    pub fn column(&self, c: usize) -> FVector {
        FVector::from_reduced(self.field, (0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn columns(&self) -> Vec<FVector> {
        self.transpose()
            .data
            .chunks(self.rows.max(1))
            .take(self.cols)
            .map(|c| FVector::from_reduced(self.field, c.to_vec()))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        Self::from_reduced(self.field, self.cols, self.rows, data)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// `M v`, counting one multiply-add per stored entry.
    pub fn matvec_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.field.ensure_same(&v.field())?;
        if v.len() != self.cols {
            return Err(shape(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        ops.muladds(self.rows * self.cols);
        let x = v.as_slice();
        let out = (0..self.rows)
            .map(|r| self.field.dot(self.row(r), x))
            .collect();
        Ok(FVector::from_reduced(self.field, out))
    }

    pub fn matvec(&self, v: &FVector) -> Result<FVector> {
        self.matvec_counted(v, &mut OpCount::default())
    }

    /// `vᵀ M`
    pub fn vecmat_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.field.ensure_same(&v.field())?;
        if v.len() != self.rows {
            return Err(shape(format!(
                "length-{} vector times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        ops.muladds(self.rows * self.cols);
        let f = self.field;
        let out = if f.is_small() && self.rows < 1 << 31 {
            let mut acc = vec![0u64; self.cols];
            for (r, &coef) in v.as_slice().iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                for (a, &m) in acc.iter_mut().zip(self.row(r)) {
                    *a += coef as u64 * m as u64;
                }
            }
            acc.into_iter().map(|a| f.reduce(a)).collect()
        } else {
            let mut acc = vec![0u32; self.cols];
            for (r, &coef) in v.as_slice().iter().enumerate() {
                f.axpy(&mut acc, coef, self.row(r));
            }
            acc
        };
        Ok(FVector::from_reduced(f, out))
    }

    pub fn vecmat(&self, v: &FVector) -> Result<FVector> {
        self.vecmat_counted(v, &mut OpCount::default())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.field.ensure_same(&other.field)?;
        if self.cols != other.rows {
            return Err(shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let bt = other.transpose();
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for c in 0..other.cols {
                data.push(self.field.dot(row, bt.row(c)));
            }
        }
        Ok(Self::from_reduced(self.field, self.rows, other.cols, data))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        self.field.ensure_same(&other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Self::from_reduced(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Self::from_reduced(f, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Self::from_reduced(f, self.rows, self.cols, data)
    }

    /// Entry positions where the two matrices differ.
    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Horizontal concatenation `[A | B | ...]`.
    pub fn hstack(field: Field, blocks: &[DenseMatrix]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(shape("hstack blocks with different row counts"));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                field.ensure_same(&b.field)?;
                data.extend_from_slice(b.row(r));
            }
        }
        Ok(Self::from_reduced(field, rows, cols, data))
    }

    /// Vertical concatenation.
    pub fn vstack(field: Field, blocks: &[DenseMatrix]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(shape("vstack blocks with different column counts"));
        }
        let mut data = Vec::new();
        for b in blocks {
            field.ensure_same(&b.field)?;
            data.extend_from_slice(&b.data);
        }
        let rows = data.len() / cols.max(1);
        Ok(Self::from_reduced(field, rows, cols, data))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(shape("submatrix out of bounds"));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            data.extend_from_slice(&self.row(r)[c0..c0 + cols]);
        }
        Ok(Self::from_reduced(self.field, rows, cols, data))
    }

    /// Embeds into the top-left corner of a zero matrix.
    pub fn padded(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows || cols < self.cols {
            return Err(shape("padding cannot shrink a matrix"));
        }
        let mut out = Self::zeros(self.field, rows, cols);
        for r in 0..self.rows {
            out.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// Triple-loop oracle written independently of `Field::dot`.
    #[allow(clippy::needless_range_loop)]
    fn naive_matvec(m: &DenseMatrix, v: &[u32]) -> Vec<u32> {
        let p = m.field().modulus() as u64;
        (0..m.rows())
            .map(|r| {
                let mut s = 0u64;
                for c in 0..m.cols() {
                    s = (s + m.get(r, c) as u64 * v[c] as u64) % p;
                }
                s as u32
            })
            .collect()
    }

    #[test]
    fn identity_matvec() {
        let v = FVector::new(f(7), vec![4, 1, 2]).unwrap();
        assert_eq!(DenseMatrix::identity(f(7), 3).matvec(&v).unwrap(), v);
    }

    #[test]
    fn two_by_two_over_f3() {
        let m = DenseMatrix::from_rows(f(3), &[vec![1, 2], vec![0, 1]]).unwrap();
        let v = FVector::new(f(3), vec![2, 2]).unwrap();
        assert_eq!(m.matvec(&v).unwrap().as_slice(), &[0, 2]);
    }

    #[test]
    fn random_against_triple_loop() {
        let mut rng = rng_from_seed(11);
        for p in [5u64, 65_537, 2_147_483_647] {
            let m = DenseMatrix::random(f(p), 8, 8, &mut rng);
            let v = FVector::random(f(p), 8, &mut rng);
            assert_eq!(
                m.matvec(&v).unwrap().as_slice(),
                naive_matvec(&m, v.as_slice())
            );
            let left = m.vecmat(&v).unwrap();
            assert_eq!(left.as_slice(), naive_matvec(&m.transpose(), v.as_slice()));
        }
    }

    #[test]
    fn matvec_shape_error() {
        let m = DenseMatrix::zeros(f(5), 2, 3);
        let v = FVector::zeros(f(5), 2);
        assert!(matches!(m.matvec(&v), Err(Error::Shape(_))));
        assert!(matches!(
            m.matvec(&FVector::zeros(f(7), 3)),
            Err(Error::FieldMismatch(5, 7))
        ));
    }

    #[test]
    fn matmul_associates_with_matvec() {
        let mut rng = rng_from_seed(3);
        let a = DenseMatrix::random(f(13), 5, 7, &mut rng);
        let b = DenseMatrix::random(f(13), 7, 4, &mut rng);
        let v = FVector::random(f(13), 4, &mut rng);
        let lhs = a.matmul(&b).unwrap().matvec(&v).unwrap();
        let rhs = a.matvec(&b.matvec(&v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn stacking_and_columns() {
        let mut rng = rng_from_seed(5);
        let a = DenseMatrix::random(f(7), 3, 2, &mut rng);
        let b = DenseMatrix::random(f(7), 3, 4, &mut rng);
        let h = DenseMatrix::hstack(f(7), &[a.clone(), b.clone()]).unwrap();
        assert_eq!(h.submatrix(0, 2, 3, 4).unwrap(), b);
        let v = DenseMatrix::vstack(f(7), &[a.transpose(), b.transpose()]).unwrap();
        assert_eq!(v, h.transpose());
        let cols = h.columns();
        assert_eq!(DenseMatrix::from_columns(f(7), 3, &cols).unwrap(), h);
    }

    #[test]
    fn json_roundtrip_validates() {
        let m = DenseMatrix::from_rows(f(5), &[vec![1, 2], vec![3, 4]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: DenseMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = s.replace("4]", "9]");
        assert!(serde_json::from_str::<DenseMatrix>(&bad).is_err());
    }
}
