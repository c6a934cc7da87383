use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{shape, Error, Result};
use crate::field::Field;
use crate::ops::OpCount;
use crate::vector::FVector;

/// Sparse matrix over F_p.
///
/// The public view is a row-major sorted list of `(row, col, value)` triplets
/// with nonzero values and no duplicates; storage is compressed-row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SparseRepr", into = "SparseRepr")]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SparseRepr {
    field: Field,
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, u32)>,
}

impl TryFrom<SparseRepr> for SparseMatrix {
    type Error = Error;

    fn try_from(r: SparseRepr) -> Result<Self> {
        SparseMatrix::from_triplets(r.field, r.rows, r.cols, r.triplets)
    }
}

impl From<SparseMatrix> for SparseRepr {
    fn from(m: SparseMatrix) -> Self {
        SparseRepr {
            field: m.field,
            rows: m.rows,
            cols: m.cols,
            triplets: m.triplets().collect(),
        }
    }
}

impl SparseMatrix {
    pub fn empty(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Accepts triplets in any order; rejects zeros, duplicates and
    /// out-of-range indices.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, u32)>,
    ) -> Result<Self> {
        if cols > u32::MAX as usize {
            return Err(Error::BadSparse("column count exceeds u32".into()));
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut prev: Option<(usize, usize)> = None;
        for &(r, c, v) in &triplets {
            if r >= rows || c >= cols {
                return Err(Error::BadSparse(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            field.check(v)?;
            if v == 0 {
                return Err(Error::BadSparse(format!("explicit zero at ({r}, {c})")));
            }
            if prev == Some((r, c)) {
                return Err(Error::BadSparse(format!("duplicate entry ({r}, {c})")));
            }
            prev = Some((r, c));
            row_ptr[r + 1] += 1;
            col_idx.push(c as u32);
            values.push(v);
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self {
            field,
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut out = Self::empty(m.field(), m.rows(), m.cols());
        for r in 0..m.rows() {
            for (c, &v) in m.row(r).iter().enumerate() {
                if v != 0 {
                    out.col_idx.push(c as u32);
                    out.values.push(v);
                }
            }
            out.row_ptr[r + 1] = out.values.len();
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn density(&self) -> f64 {
        if self.rows * self.cols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.rows * self.cols) as f64
        }
    }

    /// Row-major sorted triplets.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k] as usize, self.values[k]))
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut data = vec![0u32; self.rows * self.cols];
        for (r, c, v) in self.triplets() {
            data[r * self.cols + c] = v;
        }
        DenseMatrix::from_reduced(self.field, self.rows, self.cols, data)
    }

    /// `E v` in Θ(nnz): one multiply-add per triplet.
    pub fn matvec_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.field.ensure_same(&v.field())?;
        if v.len() != self.cols {
            return Err(shape(format!(
                "{}x{} sparse matrix times length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0u32; self.rows];
        self.matvec_add_into(v.as_slice(), &mut out, ops);
        Ok(FVector::from_reduced(self.field, out))
    }

    pub fn matvec(&self, v: &FVector) -> Result<FVector> {
        self.matvec_counted(v, &mut OpCount::default())
    }

    /// `out += E x` on raw reduced slices; lengths are the caller's contract.
    pub fn matvec_add_into(&self, x: &[u32], out: &mut [u32], ops: &mut OpCount) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        let f = self.field;
        ops.muladds(self.nnz());
        for (r, o) in out.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            if lo == hi {
                continue;
            }
            let mut acc = *o as u64;
            for k in lo..hi {
                acc += f.mul(self.values[k], x[self.col_idx[k] as usize]) as u64;
            }
            *o = f.reduce(acc);
        }
    }

    /// `out += E X`, row by row.
    pub fn matmul_add_into(
        &self,
        x: &DenseMatrix,
        out: &mut DenseMatrix,
        ops: &mut OpCount,
    ) -> Result<()> {
        if x.rows() != self.cols || out.rows() != self.rows || out.cols() != x.cols() {
            return Err(shape("sparse product shape mismatch"));
        }
        let f = self.field;
        ops.muladds(self.nnz() * x.cols());
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                f.axpy(
                    out.row_mut(r),
                    self.values[k],
                    x.row(self.col_idx[k] as usize),
                );
            }
        }
        Ok(())
    }

    /// `out += xᵀ E`
    pub fn vecmat_add_into(&self, x: &[u32], out: &mut [u32], ops: &mut OpCount) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        let f = self.field;
        ops.muladds(self.nnz());
        for (r, &coef) in x.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k] as usize;
                out[c] = f.mul_add(out[c], coef, self.values[k]);
            }
        }
    }

    pub fn vecmat_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.field.ensure_same(&v.field())?;
        if v.len() != self.rows {
            return Err(shape(format!(
                "length-{} vector times {}x{} sparse matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0u32; self.cols];
        self.vecmat_add_into(v.as_slice(), &mut out, ops);
        Ok(FVector::from_reduced(self.field, out))
    }

    /// Adds the stored entries into a dense matrix of the same shape.
    pub fn add_into_dense(&self, m: &mut DenseMatrix) -> Result<()> {
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err(shape("sparse/dense shape mismatch"));
        }
        let f = self.field;
        for (r, c, v) in self.triplets() {
            let cur = m.get(r, c);
            m.set(r, c, f.add(cur, v))?;
        }
        Ok(())
    }
}

/// Each cell independently nonzero with probability `rate`; nonzero values are
/// uniform on F_p \ {0}. Gaps between nonzero cells are drawn geometrically,
/// which has the same law as per-cell coins.
pub fn sample_bernoulli_sparse<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    rows: usize,
    cols: usize,
    rate: f64,
) -> Result<SparseMatrix> {
    if !(0.0..=1.0).contains(&rate) || rate.is_nan() {
        return Err(Error::InvalidParam(format!("rate {rate} not in [0, 1]")));
    }
    let cells = rows * cols;
    let mut out = SparseMatrix::empty(field, rows, cols);
    if rate == 0.0 || cells == 0 {
        return Ok(out);
    }
    let expected = (cells as f64 * rate) as usize;
    out.col_idx.reserve(expected + expected / 8 + 16);
    out.values.reserve(expected + expected / 8 + 16);
    let push = |out: &mut SparseMatrix, pos: usize, rng: &mut R| {
        let (r, c) = (pos / cols, pos % cols);
        out.row_ptr[r + 1] += 1;
        out.col_idx.push(c as u32);
        out.values.push(field.random_nonzero(rng));
    };
    if rate == 1.0 {
        for pos in 0..cells {
            push(&mut out, pos, rng);
        }
    } else {
        let gaps = Geometric::new(rate).map_err(|e| Error::InvalidParam(e.to_string()))?;
        let mut pos = 0usize;
        loop {
            let skip = gaps.sample(rng);
            pos = match usize::try_from(skip).ok().and_then(|s| pos.checked_add(s)) {
                Some(p) if p < cells => p,
                _ => break,
            };
            push(&mut out, pos, rng);
            pos += 1;
        }
    }
    for r in 0..rows {
        out.row_ptr[r + 1] += out.row_ptr[r];
    }
    Ok(out)
}
