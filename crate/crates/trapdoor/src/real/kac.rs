use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};
use tdm_core::serial::{ByteReader, ByteWriter, Header, Kind};
use tdm_core::{OpCount, TdmRng};

use super::matrix::RealMatrix;
use crate::error::{shape, Error, Result};
use crate::family::{
    Domain, Family, RealLinearMap, SampleRequest, Sampled, Summary, MATERIALIZE_CAP,
};

/// Rotation by θ in the plane of `e_i`, `e_j`: `e_i -> cos θ e_i + sin θ e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub i: u32,
    pub j: u32,
    pub cos: f64,
    pub sin: f64,
}

impl Rotation {
    pub fn new(i: usize, j: usize, theta: f64) -> Result<Self> {
        if i == j {
            return Err(Error::BadShape(format!(
                "rotation plane needs i != j, got {i}"
            )));
        }
        Ok(Self {
            i: i as u32,
            j: j as u32,
            cos: theta.cos(),
            sin: theta.sin(),
        })
    }

    pub fn inverse(self) -> Self {
        Self {
            sin: -self.sin,
            ..self
        }
    }

    #[inline]
    fn rotate(self, x: &mut [f64]) {
        let (i, j) = (self.i as usize, self.j as usize);
        let (a, b) = (x[i], x[j]);
        x[i] = self.cos * a - self.sin * b;
        x[j] = self.sin * a + self.cos * b;
    }
}

/// `Q_T = R_T ··· R_1`: the state of Kac's walk after `T` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationChain {
    n: usize,
    steps: Vec<Rotation>,
}

/// `n · ceil(log2 n)^2`
pub fn default_steps(n: usize) -> usize {
    let l = if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    };
    n * l * l
}

impl RotationChain {
    pub fn new(n: usize, steps: Vec<Rotation>) -> Result<Self> {
        for r in &steps {
            if r.i == r.j || r.i as usize >= n || r.j as usize >= n {
                return Err(Error::BadShape(format!(
                    "rotation ({}, {}) invalid for dimension {n}",
                    r.i, r.j
                )));
            }
            if ((r.cos * r.cos + r.sin * r.sin) - 1.0).abs() > 1e-12 {
                return Err(Error::BadShape("rotation is not unit length".into()));
            }
        }
        Ok(Self { n, steps })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            steps: Vec::new(),
        }
    }

    /// `T` i.i.d. steps with the plane and angle uniform.
    pub fn sample<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDim(n));
        }
        let steps = (0..t)
            .map(|_| {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let theta = rng.random::<f64>() * TAU;
                Rotation {
                    i: i as u32,
                    j: j as u32,
                    cos: theta.cos(),
                    sin: theta.sin(),
                }
            })
            .collect();
        Ok(Self { n, steps })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Rotation] {
        &self.steps
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(shape(format!(
                "chain of dim {} applied to length-{} vector",
                self.n,
                v.len()
            )));
        }
        Ok(())
    }

    /// In place; lengths are the caller's contract.
    pub fn apply_in_place(&self, x: &mut [f64], ops: &mut OpCount) {
        for r in &self.steps {
            r.rotate(x);
        }
        ops.muls += 4 * self.steps.len() as u64;
        ops.adds += 2 * self.steps.len() as u64;
    }

    pub fn apply_inverse_in_place(&self, x: &mut [f64], ops: &mut OpCount) {
        for r in self.steps.iter().rev() {
            r.inverse().rotate(x);
        }
        ops.muls += 4 * self.steps.len() as u64;
        ops.adds += 2 * self.steps.len() as u64;
    }

    /// Reverse order with negated angles.
    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            steps: self.steps.iter().rev().map(|r| r.inverse()).collect(),
        }
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        for r in &self.steps {
            w.u32(r.i);
            w.u32(r.j);
            w.f64(r.cos);
            w.f64(r.sin);
        }
    }

    pub(crate) fn read(r: &mut ByteReader<'_>, n: usize, t: usize) -> Result<Self> {
        let steps = (0..t)
            .map(|_| {
                Ok(Rotation {
                    i: r.u32()?,
                    j: r.u32()?,
                    cos: r.f64()?,
                    sin: r.f64()?,
                })
            })
            .collect::<tdm_core::Result<Vec<_>>>()?;
        Self::new(n, steps)
    }

    pub fn decode_body(r: &mut ByteReader<'_>, header: &Header) -> Result<Self> {
        Self::read(r, header.n as usize, header.m as usize)
    }
}

impl RealLinearMap for RotationChain {
    fn family(&self) -> &str {
        "kac"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn apply_counted(&self, v: &[f64], ops: &mut OpCount) -> Result<Vec<f64>> {
        self.check(v)?;
        let mut x = v.to_vec();
        self.apply_in_place(&mut x, ops);
        Ok(x)
    }

    fn apply_inverse(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(v)?;
        let mut x = v.to_vec();
        self.apply_inverse_in_place(&mut x, &mut OpCount::default());
        Ok(x)
    }

    /// Rotates the rows of the identity, so `Q = R_T ··· R_1 I`.
    fn materialize(&self) -> Result<RealMatrix> {
        if self.n > MATERIALIZE_CAP {
            return Err(tdm_core::Error::TooLarge {
                dim: self.n,
                cap: MATERIALIZE_CAP,
            }
            .into());
        }
        let n = self.n;
        let mut q = RealMatrix::identity(n);
        let mut data = q.as_slice().to_vec();
        for r in &self.steps {
            let (i, j) = (r.i as usize, r.j as usize);
            for c in 0..n {
                let (a, b) = (data[i * n + c], data[j * n + c]);
                data[i * n + c] = r.cos * a - r.sin * b;
                data[j * n + c] = r.sin * a + r.cos * b;
            }
        }
        q = RealMatrix::new(n, n, data)?;
        Ok(q)
    }

    fn summary(&self) -> Summary {
        Summary::new("kac", self.n, None).with("steps", self.steps.len())
    }

    fn encode(&self) -> Vec<u8> {
        let mut w = ByteWriter::new();
        Header {
            modulus: 0,
            kind: Kind::KacChain,
            n: self.n as u64,
            m: self.steps.len() as u64,
        }
        .write(&mut w);
        self.write(&mut w);
        w.into_bytes()
    }
}

pub struct KacFamily;

impl Family for KacFamily {
    fn name(&self) -> &str {
        "kac"
    }

    fn domain(&self) -> Domain {
        Domain::Real
    }

    fn description(&self) -> &str {
        "Kac random walk, T = n ceil(log2 n)^2 Givens rotations by default"
    }

    fn sample(&self, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled> {
        let t = req.steps.unwrap_or_else(|| default_steps(req.n));
        Ok(Sampled::Real(Box::new(RotationChain::sample(
            req.n, t, rng,
        )?)))
    }
}
