//! McEliece-style trapdoored matrices over a quasi-cyclic code.
//!
//! One column block is `P·G·S` with `G` an `n x k` grid of circulants, `P` a
//! permutation and `S` an invertible scrambler; `n/k` independent blocks are
//! placed side by side to make the matrix square.

use std::sync::Arc;

use rand::Rng;
use tdm_core::serial::{self, ByteReader, ByteWriter, Header, Kind};
use tdm_core::{
    sample_invertible, Circulant, DenseMatrix, FVector, Field, NttTable, OpCount, Permutation,
    TdmRng,
};

use crate::error::{shape, Error, Result};
use crate::family::{
    Domain, Family, FieldTrapdoor, SampleRequest, Sampled, Summary, MATERIALIZE_CAP,
};

/// Generator matrix made of an `r x c` grid of `b x b` circulants.
#[derive(Debug, Clone)]
pub struct QcGenerator {
    field: Field,
    b: usize,
    r: usize,
    c: usize,
    blocks: Vec<Circulant>,
    table: Option<Arc<NttTable>>,
}

impl PartialEq for QcGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && (self.b, self.r, self.c) == (other.b, other.r, other.c)
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(x, y)| x.first_row() == y.first_row())
    }
}

impl QcGenerator {
    /// `first_rows` lists the `r·c` blocks row by row.
    pub fn from_first_rows(
        field: Field,
        b: usize,
        r: usize,
        c: usize,
        first_rows: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if b == 0 || r < c || first_rows.len() != r * c || first_rows.iter().any(|x| x.len() != b) {
            return Err(Error::BadShape(format!(
                "generator grid {r}x{c} of size-{b} circulants needs r >= c and {} rows of length {b}",
                r * c
            )));
        }
        for row in &first_rows {
            for &x in row {
                field.check(x)?;
            }
        }
        let table = NttTable::new(field, b).map(Arc::new);
        let blocks = first_rows
            .into_iter()
            .map(|row| Circulant::with_table(field, row, table.clone()))
            .collect();
        Ok(Self {
            field,
            b,
            r,
            c,
            blocks,
            table,
        })
    }

    pub fn sample<R: Rng + ?Sized>(
        field: Field,
        b: usize,
        r: usize,
        c: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let rows = (0..r * c)
            .map(|_| (0..b).map(|_| field.random(rng)).collect())
            .collect();
        Self::from_first_rows(field, b, r, c, rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn block_size(&self) -> usize {
        self.b
    }

    pub fn rows(&self) -> usize {
        self.r * self.b
    }

    pub fn cols(&self) -> usize {
        self.c * self.b
    }

    pub fn uses_ntt(&self) -> bool {
        self.table.is_some()
    }

    pub fn block(&self, i: usize, j: usize) -> &Circulant {
        &self.blocks[i * self.c + j]
    }

    /// `G x`. With an NTT each input block is transformed once and each
    /// output block inverted once; products are summed in the frequency domain.
    pub fn encode_raw(&self, x: &[u32], ops: &mut OpCount) -> Vec<u32> {
        debug_assert_eq!(x.len(), self.cols());
        let (f, b) = (self.field, self.b);
        let mut out = Vec::with_capacity(self.rows());
        match &self.table {
            Some(table) => {
                let spectra: Vec<Vec<u32>> = x
                    .chunks_exact(b)
                    .map(|chunk| {
                        let mut a = chunk.to_vec();
                        table.forward(&mut a, ops);
                        a
                    })
                    .collect();
                for i in 0..self.r {
                    let mut acc = vec![0u32; b];
                    for (j, s) in spectra.iter().enumerate() {
                        let g = self.block(i, j).spectrum().expect("shared table");
                        for ((a, &u), &w) in acc.iter_mut().zip(s).zip(g) {
                            *a = f.mul_add(*a, u, w);
                        }
                    }
                    ops.muladds(self.c * b);
                    table.inverse(&mut acc, ops);
                    out.extend(acc);
                }
            }
            None => {
                for i in 0..self.r {
                    let mut acc = vec![0u32; b];
                    for (j, chunk) in x.chunks_exact(b).enumerate() {
                        let part = self.block(i, j).apply_slice(chunk, ops);
                        f.add_assign(&mut acc, &part);
                    }
                    ops.adds += (self.c * b) as u64;
                    out.extend(acc);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let b = self.b;
        DenseMatrix::from_fn(self.field, self.rows(), self.cols(), |row, col| {
            let blk = self.block(row / b, col / b);
            blk.first_row()[(col % b + b - row % b) % b] as u64
        })
    }

    fn write(&self, w: &mut ByteWriter) {
        w.u64(self.b as u64);
        w.u64(self.r as u64);
        w.u64(self.c as u64);
        for blk in &self.blocks {
            w.u32s(blk.first_row());
        }
    }

    fn read(r: &mut ByteReader<'_>, field: Field) -> Result<Self> {
        let b = r.len()?;
        let rows = r.len()?;
        let cols = r.len()?;
        let count = rows
            .checked_mul(cols)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| tdm_core::Error::Format("generator grid too large".into()))?;
        let first_rows = (0..count)
            .map(|_| r.u32s(b))
            .collect::<tdm_core::Result<Vec<_>>>()?;
        Self::from_first_rows(field, b, rows, cols, first_rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scrambler {
    Dense(DenseMatrix),
    Stacked(Box<StackedTrapdoor>),
}

impl Scrambler {
    pub fn dim(&self) -> usize {
        match self {
            Scrambler::Dense(m) => m.rows(),
            Scrambler::Stacked(t) => t.dim(),
        }
    }

    fn apply_raw(&self, x: &[u32], ops: &mut OpCount) -> Vec<u32> {
        match self {
            Scrambler::Dense(m) => {
                let f = m.field();
                ops.muladds(m.rows() * m.cols());
                (0..m.rows()).map(|r| f.dot(m.row(r), x)).collect()
            }
            Scrambler::Stacked(t) => t.apply_raw(x, ops),
        }
    }

    fn materialize(&self) -> Result<DenseMatrix> {
        match self {
            Scrambler::Dense(m) => Ok(m.clone()),
            Scrambler::Stacked(t) => t.materialize(),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Scrambler::Dense(_) => 0,
            Scrambler::Stacked(t) => 1 + t.depth(),
        }
    }
}

/// `P·G·S`, an `n x k` block.
#[derive(Debug, Clone, PartialEq)]
pub struct McElieceColumn {
    perm: Permutation,
    gen: QcGenerator,
    scrambler: Scrambler,
}

impl McElieceColumn {
    pub fn new(perm: Permutation, gen: QcGenerator, scrambler: Scrambler) -> Result<Self> {
        if perm.len() != gen.rows() || scrambler.dim() != gen.cols() {
            return Err(Error::BadShape(format!(
                "permutation {} / generator {}x{} / scrambler {}",
                perm.len(),
                gen.rows(),
                gen.cols(),
                scrambler.dim()
            )));
        }
        Ok(Self {
            perm,
            gen,
            scrambler,
        })
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn gen(&self) -> &QcGenerator {
        &self.gen
    }

    pub fn scrambler(&self) -> &Scrambler {
        &self.scrambler
    }

    pub fn rows(&self) -> usize {
        self.gen.rows()
    }

    pub fn cols(&self) -> usize {
        self.gen.cols()
    }

    /// `out += P G S x`
    fn apply_add_into(&self, x: &[u32], out: &mut [u32], ops: &mut OpCount) {
        let f = self.gen.field;
        let s = self.scrambler.apply_raw(x, ops);
        let g = self.gen.encode_raw(&s, ops);
        for (&sigma, &gi) in self.perm.as_slice().iter().zip(&g) {
            let o = &mut out[sigma as usize];
            *o = f.add(*o, gi);
        }
        ops.adds += g.len() as u64;
    }

    pub fn materialize(&self) -> Result<DenseMatrix> {
        let gs = self.gen.to_dense().matmul(&self.scrambler.materialize()?)?;
        Ok(self.perm.permute_rows(&gs)?)
    }
}

/// `[M_1 | ... | M_{n/k}]`, square of dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedTrapdoor {
    field: Field,
    n: usize,
    k: usize,
    columns: Vec<McElieceColumn>,
}

/// Smallest power of two at least `ceil(sqrt n)`.
pub fn default_k(n: usize) -> usize {
    ((n as f64).sqrt().ceil() as usize)
        .max(1)
        .next_power_of_two()
}

impl StackedTrapdoor {
    pub fn new(columns: Vec<McElieceColumn>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::BadShape("no columns".into()));
        };
        let (n, k, field) = (first.rows(), first.cols(), first.gen.field);
        if columns
            .iter()
            .any(|c| c.rows() != n || c.cols() != k || c.gen.field != field)
            || columns.len() * k != n
        {
            return Err(Error::BadShape(format!(
                "{} columns of width {k} do not tile dimension {n}",
                columns.len()
            )));
        }
        Ok(Self {
            field,
            n,
            k,
            columns,
        })
    }

    /// `n` must already be a multiple of `k`, and `k` of `b`. A recursive
    /// scrambler is used while `k` exceeds `leaf`.
    pub fn sample<R: Rng + ?Sized>(
        n: usize,
        k: usize,
        b: usize,
        field: Field,
        recurse_above: Option<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        if b == 0 || k == 0 || k % b != 0 || n % k != 0 {
            return Err(Error::BadShape(format!(
                "need b | k | n, got n = {n}, k = {k}, b = {b}"
            )));
        }
        let columns = (0..n / k)
            .map(|_| {
                let perm = Permutation::random(n, rng);
                let gen = QcGenerator::sample(field, b, n / b, k / b, rng)?;
                let scrambler = match recurse_above {
                    Some(leaf) if k > leaf && default_k(k) < k => {
                        let kk = default_k(k);
                        Scrambler::Stacked(Box::new(Self::sample(
                            k,
                            kk,
                            kk,
                            field,
                            recurse_above,
                            rng,
                        )?))
                    }
                    _ => Scrambler::Dense(sample_invertible(rng, k, field)),
                };
                McElieceColumn::new(perm, gen, scrambler)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(columns)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn columns(&self) -> &[McElieceColumn] {
        &self.columns
    }

    pub fn depth(&self) -> usize {
        self.columns[0].scrambler.depth()
    }

    pub fn apply_raw(&self, v: &[u32], ops: &mut OpCount) -> Vec<u32> {
        let mut out = vec![0u32; self.n];
        for (col, x) in self.columns.iter().zip(v.chunks_exact(self.k)) {
            col.apply_add_into(x, &mut out, ops);
        }
        out
    }

    pub fn materialize(&self) -> Result<DenseMatrix> {
        if self.n > MATERIALIZE_CAP {
            return Err(tdm_core::Error::TooLarge {
                dim: self.n,
                cap: MATERIALIZE_CAP,
            }
            .into());
        }
        let blocks = self
            .columns
            .iter()
            .map(McElieceColumn::materialize)
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix::hstack(self.field, &blocks)?)
    }

    fn write(&self, w: &mut ByteWriter) {
        w.u64(self.n as u64);
        w.u64(self.k as u64);
        w.u64(self.columns.len() as u64);
        for col in &self.columns {
            serial::write_permutation_payload(w, &col.perm);
            col.gen.write(w);
            match &col.scrambler {
                Scrambler::Dense(m) => {
                    w.u8(0);
                    serial::write_dense_payload(w, m);
                }
                Scrambler::Stacked(t) => {
                    w.u8(1);
                    t.write(w);
                }
            }
        }
    }

    fn read(r: &mut ByteReader<'_>, field: Field) -> Result<Self> {
        let n = r.len()?;
        let k = r.len()?;
        let count = r.len()?;
        if count == 0 || count > n {
            return Err(tdm_core::Error::Format(format!("column count {count}")).into());
        }
        let columns = (0..count)
            .map(|_| {
                let perm = serial::read_permutation_payload(r, n)?;
                let gen = QcGenerator::read(r, field)?;
                let scrambler = match r.u8()? {
                    0 => Scrambler::Dense(serial::read_dense_payload(r, field, k, k)?),
                    1 => Scrambler::Stacked(Box::new(Self::read(r, field)?)),
                    t => return Err(tdm_core::Error::Format(format!("scrambler tag {t}")).into()),
                };
                McElieceColumn::new(perm, gen, scrambler)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(columns)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct McElieceParams {
    /// Defaults to [`default_k`].
    pub k: Option<usize>,
    /// Defaults to `k`.
    pub b: Option<usize>,
    pub recurse: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McElieceTrapdoor {
    family: String,
    logical: usize,
    inner: StackedTrapdoor,
}

impl McElieceTrapdoor {
    pub fn sample<R: Rng + ?Sized>(
        n: usize,
        params: McElieceParams,
        field: Field,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadShape("dimension must be >= 1".into()));
        }
        let k = params.k.unwrap_or_else(|| default_k(n));
        let b = params.b.unwrap_or(k);
        let padded = k * n.div_ceil(k);
        let leaf = {
            let l = if n <= 1 {
                0
            } else {
                (usize::BITS - (n - 1).leading_zeros()) as usize
            };
            (l * l).max(16)
        };
        let inner =
            StackedTrapdoor::sample(padded, k, b, field, params.recurse.then_some(leaf), rng)?;
        Ok(Self {
            family: "mceliece".into(),
            logical: n,
            inner,
        })
    }

    pub fn from_stacked(inner: StackedTrapdoor, logical: usize) -> Result<Self> {
        if logical == 0 || logical > inner.dim() {
            return Err(Error::BadShape(format!(
                "logical dimension {logical} outside 1..={}",
                inner.dim()
            )));
        }
        Ok(Self {
            family: "mceliece".into(),
            logical,
            inner,
        })
    }

    pub(crate) fn named(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    pub fn stacked(&self) -> &StackedTrapdoor {
        &self.inner
    }

    pub fn decode_body(r: &mut ByteReader<'_>, header: &Header) -> Result<Self> {
        let inner = StackedTrapdoor::read(r, header.field()?)?;
        if inner.dim() as u64 != header.m {
            return Err(tdm_core::Error::Format("padded dimension mismatch".into()).into());
        }
        Self::from_stacked(inner, header.n as usize)
    }
}

impl FieldTrapdoor for McElieceTrapdoor {
    fn family(&self) -> &str {
        &self.family
    }

    fn field(&self) -> Field {
        self.inner.field
    }

    fn dim(&self) -> usize {
        self.logical
    }

    fn apply_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.field().ensure_same(&v.field())?;
        if v.len() != self.logical {
            return Err(shape(format!(
                "trapdoor of dim {} applied to length-{} vector",
                self.logical,
                v.len()
            )));
        }
        let mut x = v.as_slice().to_vec();
        x.resize(self.inner.dim(), 0);
        let mut out = self.inner.apply_raw(&x, ops);
        out.truncate(self.logical);
        Ok(FVector::from_reduced(self.field(), out))
    }

    fn materialize(&self) -> Result<DenseMatrix> {
        let m = self.inner.materialize()?;
        if self.logical == self.inner.dim() {
            Ok(m)
        } else {
            Ok(m.submatrix(0, 0, self.logical, self.logical)?)
        }
    }

    fn summary(&self) -> Summary {
        let gen = &self.inner.columns[0].gen;
        Summary::new(&self.family, self.logical, Some(self.field().modulus()))
            .with("padded_dim", self.inner.dim())
            .with("k", self.inner.k)
            .with("b", gen.block_size())
            .with("columns", self.inner.columns.len())
            .with("ntt", gen.uses_ntt() as u64)
            .with("levels", self.inner.depth())
    }

    fn encode(&self) -> Vec<u8> {
        let mut w = ByteWriter::new();
        Header {
            modulus: self.field().modulus() as u64,
            kind: Kind::McElieceTrapdoor,
            n: self.logical as u64,
            m: self.inner.dim() as u64,
        }
        .write(&mut w);
        self.inner.write(&mut w);
        w.into_bytes()
    }
}

pub struct McElieceFamily {
    name: String,
    params: McElieceParams,
}

impl McElieceFamily {
    pub fn new(name: &str, recurse: bool) -> Self {
        Self::with_params(
            name,
            McElieceParams {
                recurse,
                ..McElieceParams::default()
            },
        )
    }

    pub fn with_params(name: &str, params: McElieceParams) -> Self {
        Self {
            name: name.to_string(),
            params,
        }
    }
}

impl Family for McElieceFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> Domain {
        Domain::Field
    }

    fn description(&self) -> &str {
        if self.params.recurse {
            "stacked quasi-cyclic McEliece, recursive scrambler"
        } else {
            "stacked quasi-cyclic McEliece, dense scrambler"
        }
    }

    fn sample(&self, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled> {
        let t = McElieceTrapdoor::sample(req.n, self.params, req.field, rng)?.named(&self.name);
        Ok(Sampled::Field(Box::new(t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tdm_core::rng_from_seed;

    #[test]
    fn generator_encode_matches_dense() {
        for p in [2u64, 5, 257] {
            let f = Field::new(p).unwrap();
            let mut rng = rng_from_seed(p);
            let g = QcGenerator::sample(f, 8, 4, 2, &mut rng).unwrap();
            assert_eq!(g.uses_ntt(), p == 257);
            let x = FVector::random(f, 16, &mut rng);
            let got = g.encode_raw(x.as_slice(), &mut OpCount::default());
            assert_eq!(got, g.to_dense().matvec(&x).unwrap().into_vec());
        }
    }

    #[test]
    fn generator_rejects_wide_grid() {
        let f = Field::new(5).unwrap();
        assert!(QcGenerator::from_first_rows(f, 2, 1, 2, vec![vec![0, 1]; 2]).is_err());
    }

    #[test]
    fn single_block_column() {
        let f = Field::new(257).unwrap();
        let mut rng = rng_from_seed(9);
        let t = McElieceTrapdoor::sample(
            16,
            McElieceParams {
                k: Some(16),
                b: Some(16),
                recurse: false,
            },
            f,
            &mut rng,
        )
        .unwrap();
        let col = &t.stacked().columns()[0];
        assert_eq!(t.stacked().columns().len(), 1);
        let Scrambler::Dense(s) = &col.scrambler else {
            panic!()
        };
        let expect = col
            .perm
            .to_dense(f)
            .matmul(&col.gen.block(0, 0).to_dense())
            .unwrap()
            .matmul(s)
            .unwrap();
        assert_eq!(t.materialize().unwrap(), expect);
    }

    #[test]
    fn shape_rules() {
        let f = Field::new(5).unwrap();
        let mut rng = rng_from_seed(0);
        let bad = McElieceParams {
            k: Some(8),
            b: Some(3),
            recurse: false,
        };
        assert!(matches!(
            McElieceTrapdoor::sample(64, bad, f, &mut rng),
            Err(Error::BadShape(_))
        ));
        let t = McElieceTrapdoor::sample(100, McElieceParams::default(), f, &mut rng).unwrap();
        assert_eq!(t.stacked().k(), 16);
        assert_eq!(t.stacked().dim(), 112);
        assert_eq!(default_k(1 << 14), 128);
        assert_eq!(default_k(128), 16);
    }

    #[test]
    fn recursive_scrambler() {
        let f = Field::new(257).unwrap();
        let mut rng = rng_from_seed(4);
        let t = McElieceTrapdoor::sample(
            1024,
            McElieceParams {
                recurse: true,
                ..Default::default()
            },
            f,
            &mut rng,
        )
        .unwrap();
        // k = 32 is below the n = 1024 leaf threshold of 100
        assert_eq!(t.stacked().depth(), 0);
        let t = StackedTrapdoor::sample(256, 64, 64, f, Some(16), &mut rng).unwrap();
        assert_eq!(t.depth(), 1);
        let v = FVector::random(f, 256, &mut rng);
        let got = t.apply_raw(v.as_slice(), &mut OpCount::default());
        assert_eq!(got, t.materialize().unwrap().matvec(&v).unwrap().into_vec());
    }
}
