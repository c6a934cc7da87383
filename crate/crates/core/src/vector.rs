use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{shape, Error, Result};
use crate::field::Field;

/// A vector over F_p. Entries are always reduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr")]
pub struct FVector {
    field: Field,
    data: Vec<u32>,
}

#[derive(Deserialize)]
struct VectorRepr {
    field: Field,
    data: Vec<u32>,
}

impl TryFrom<VectorRepr> for FVector {
    type Error = Error;

    fn try_from(r: VectorRepr) -> Result<Self> {
        FVector::new(r.field, r.data)
    }
}

impl FVector {
    pub fn new(field: Field, data: Vec<u32>) -> Result<Self> {
        for &x in &data {
            field.check(x)?;
        }
        Ok(Self { field, data })
    }

    /// Reduces arbitrary integers into the field.
    pub fn from_u64s(field: Field, data: &[u64]) -> Self {
        Self {
            field,
            data: data.iter().map(|&x| field.reduce(x)).collect(),
        }
    }

    /// Caller guarantees every entry is already reduced (checked in debug builds).
    pub fn from_reduced(field: Field, data: Vec<u32>) -> Self {
        debug_assert!(data.iter().all(|&x| x < field.modulus()));
        Self { field, data }
    }

    pub fn zeros(field: Field, n: usize) -> Self {
        Self {
            field,
            data: vec![0; n],
        }
    }

    pub fn basis(field: Field, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, n);
        v.data[i] = 1 % field.modulus();
        v
    }

    pub fn random<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Self {
        Self {
            field,
            data: (0..n).map(|_| field.random(rng)).collect(),
        }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.data
    }

    pub fn get(&self, i: usize) -> u32 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, value: u32) -> Result<()> {
        self.data[i] = self.field.check(value)?;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn hamming_weight(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        self.field.ensure_same(&other.field)?;
        if self.len() != other.len() {
            return Err(shape(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Self::from_reduced(f, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Self::from_reduced(f, data))
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_reduced(f, self.data.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn dot(&self, other: &Self) -> Result<u32> {
        self.compatible(other)?;
        Ok(self.field.dot(&self.data, &other.data))
    }

    /// Zero-extends (or truncates) to length `n`.
    pub fn resized(&self, n: usize) -> Self {
        let mut data = self.data.clone();
        data.resize(n, 0);
        Self::from_reduced(self.field, data)
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        Self::from_reduced(self.field, self.data[start..start + len].to_vec())
    }

    pub fn concat(field: Field, parts: &[FVector]) -> Self {
        let mut data = Vec::with_capacity(parts.iter().map(FVector::len).sum());
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        Self::from_reduced(field, data)
    }
}
