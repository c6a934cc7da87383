//! The versioned `TDM1` binary container.
//!
//! ```text
//! "TDM1" | modulus: u64 | kind: u32 | n: u64 | m: u64 | payload
//! ```
//!
//! All integers are little-endian. `modulus` is 0 for real-valued objects.
//! Dense payload: `n·m` row-major `u32` entries. Sparse payload: triplet count
//! `u64`, then 20-byte triplets `(row: u64, col: u64, value: u32)`.

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::perm::Permutation;
use crate::sparse::SparseMatrix;

pub const MAGIC: &[u8; 4] = b"TDM1";
pub const HEADER_LEN: usize = 4 + 8 + 4 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[repr(u32)]
pub enum Kind {
    Dense = 1,
    Sparse = 2,
    Permutation = 3,
    LpnTrapdoor = 16,
    McElieceTrapdoor = 17,
    KacChain = 32,
    HaarTrapdoor = 33,
    RealDiagonal = 34,
}

impl Kind {
    pub fn from_tag(tag: u32) -> Result<Self> {
        Ok(match tag {
            1 => Kind::Dense,
            2 => Kind::Sparse,
            3 => Kind::Permutation,
            16 => Kind::LpnTrapdoor,
            17 => Kind::McElieceTrapdoor,
            32 => Kind::KacChain,
            33 => Kind::HaarTrapdoor,
            34 => Kind::RealDiagonal,
            other => return Err(Error::Format(format!("unknown kind tag {other}"))),
        })
    }

    pub fn tag(self) -> u32 {
        self as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub modulus: u64,
    pub kind: Kind,
    pub n: u64,
    pub m: u64,
}

impl Header {
    pub fn write(&self, w: &mut ByteWriter) {
        w.bytes(MAGIC);
        w.u64(self.modulus);
        w.u32(self.kind.tag());
        w.u64(self.n);
        w.u64(self.m);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let magic = r.take(4)?;
        if magic != MAGIC {
            return Err(Error::Format(format!("bad magic {magic:?}")));
        }
        Ok(Self {
            modulus: r.u64()?,
            kind: Kind::from_tag(r.u32()?)?,
            n: r.u64()?,
            m: r.u64()?,
        })
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.modulus)
    }
}

/// Reads only the header, leaving the payload for a kind-specific decoder.
pub fn peek_header(bytes: &[u8]) -> Result<Header> {
    Header::read(&mut ByteReader::new(bytes))
}

#[derive(Debug, Default, Clone)]
pub struct ByteWriter {
    buf: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, x: u8) {
        self.buf.push(x);
    }

    pub fn u32(&mut self, x: u32) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }

    pub fn u64(&mut self, x: u64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }

    pub fn f64(&mut self, x: f64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }

    pub fn u32s(&mut self, xs: &[u32]) {
        self.buf.reserve(xs.len() * 4);
        for &x in xs {
            self.u32(x);
        }
    }

    pub fn f64s(&mut self, xs: &[f64]) {
        self.buf.reserve(xs.len() * 8);
        for &x in xs {
            self.f64(x);
        }
    }
}

#[derive(Debug, Clone)]
pub struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// A `u64` length that must fit in memory-sized arithmetic.
    pub fn len(&mut self) -> Result<usize> {
        let x = self.u64()?;
        usize::try_from(x)
            .ok()
            .filter(|&x| x <= 1 << 40)
            .ok_or_else(|| Error::Format(format!("implausible length {x}")))
    }

    pub fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn u32s(&mut self, n: usize) -> Result<Vec<u32>> {
        let raw = self.take(
            n.checked_mul(4)
                .ok_or_else(|| Error::Format("overflow".into()))?,
        )?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(
            n.checked_mul(8)
                .ok_or_else(|| Error::Format("overflow".into()))?,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub fn is_empty(&self) -> bool {
        self.pos == self.buf.len()
    }

    pub fn finish(&self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Format(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )))
        }
    }
}

pub fn write_dense_payload(w: &mut ByteWriter, m: &DenseMatrix) {
    w.u32s(m.as_slice());
}

pub fn read_dense_payload(
    r: &mut ByteReader<'_>,
    field: Field,
    rows: usize,
    cols: usize,
) -> Result<DenseMatrix> {
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("dimension overflow".into()))?;
    DenseMatrix::new(field, rows, cols, r.u32s(n)?)
}

pub fn write_sparse_payload(w: &mut ByteWriter, m: &SparseMatrix) {
    w.u64(m.nnz() as u64);
    for (r, c, v) in m.triplets() {
        w.u64(r as u64);
        w.u64(c as u64);
        w.u32(v);
    }
}

pub fn read_sparse_payload(
    r: &mut ByteReader<'_>,
    field: Field,
    rows: usize,
    cols: usize,
) -> Result<SparseMatrix> {
    let count = r.len()?;
    let mut triplets = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        let row = r.len()?;
        let col = r.len()?;
        triplets.push((row, col, r.u32()?));
    }
    SparseMatrix::from_triplets(field, rows, cols, triplets)
}

pub fn write_permutation_payload(w: &mut ByteWriter, p: &Permutation) {
    w.u32s(p.as_slice());
}

pub fn read_permutation_payload(r: &mut ByteReader<'_>, n: usize) -> Result<Permutation> {
    Permutation::new(r.u32s(n)?)
}

pub fn encode_dense(m: &DenseMatrix) -> Vec<u8> {
    let mut w = ByteWriter::new();
    Header {
        modulus: m.field().modulus() as u64,
        kind: Kind::Dense,
        n: m.rows() as u64,
        m: m.cols() as u64,
    }
    .write(&mut w);
    write_dense_payload(&mut w, m);
    w.into_bytes()
}

pub fn decode_dense(bytes: &[u8]) -> Result<DenseMatrix> {
    let mut r = ByteReader::new(bytes);
    let h = Header::read(&mut r)?;
    if h.kind != Kind::Dense {
        return Err(Error::Format(format!("expected dense, found {:?}", h.kind)));
    }
    let m = read_dense_payload(&mut r, h.field()?, h.n as usize, h.m as usize)?;
    r.finish()?;
    Ok(m)
}

pub fn encode_sparse(m: &SparseMatrix) -> Vec<u8> {
    let mut w = ByteWriter::new();
    Header {
        modulus: m.field().modulus() as u64,
        kind: Kind::Sparse,
        n: m.rows() as u64,
        m: m.cols() as u64,
    }
    .write(&mut w);
    write_sparse_payload(&mut w, m);
    w.into_bytes()
}

pub fn decode_sparse(bytes: &[u8]) -> Result<SparseMatrix> {
    let mut r = ByteReader::new(bytes);
    let h = Header::read(&mut r)?;
    if h.kind != Kind::Sparse {
        return Err(Error::Format(format!(
            "expected sparse, found {:?}",
            h.kind
        )));
    }
    let m = read_sparse_payload(&mut r, h.field()?, h.n as usize, h.m as usize)?;
    r.finish()?;
    Ok(m)
}

/// JSON debug mirror of a TDM1 record: the header fields plus a
/// kind-specific payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonRecord<T> {
    pub format: String,
    pub header: Header,
    pub payload: T,
}

impl<T> JsonRecord<T> {
    pub fn new(header: Header, payload: T) -> Self {
        Self {
            format: "TDM1".into(),
            header,
            payload,
        }
    }
}
