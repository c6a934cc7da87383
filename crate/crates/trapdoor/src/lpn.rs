//! LPN-based trapdoored matrices: `M = A·B + E`, applied recursively.
//!
//! `A` is a vertical stack and `B` a horizontal stack of `n/k` smaller
//! trapdoored matrices of dimension `k`, and `E` is Bernoulli-sparse noise.
//! Indistinguishability from uniform rests on the LPN assumption: noisy
//! random linear samples `<a, s> + e` look uniform. The adversary, its
//! advantage bound and the subexponential exponent have no runtime meaning
//! here; the schedule only chooses `k` and the noise rates.

use rand::Rng;
use serde::{Deserialize, Serialize};
use tdm_core::serial::{self, ByteReader, ByteWriter, Header, Kind};
use tdm_core::{
    sample_bernoulli_sparse, DenseMatrix, FVector, Field, OpCount, SparseMatrix, TdmRng,
};

use crate::error::{shape, Error, Result};
use crate::family::{
    Domain, Family, FieldTrapdoor, SampleRequest, Sampled, Summary, MATERIALIZE_CAP,
};

/// Where recursion stops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LeafRule {
    /// `max(ceil(log2 n)^2, 16)`
    PolyLog,
    /// `n^gamma`
    Power(f64),
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LevelRule {
    /// `n_{i+1} = round(n_i^{1-eps})`, `p_i = n_{i+1}^{-delta}`.
    Recursive,
    /// One level, `k = ceil(sqrt n)`, rate `(log2 k)^c / k`, uniform leaves.
    Base { c: f64 },
    /// Caller-chosen level dimensions and noise rates.
    Explicit { dims: Vec<usize>, rates: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpnSchedule {
    pub epsilon: f64,
    pub delta: f64,
    pub leaf: LeafRule,
    pub rule: LevelRule,
}

impl Default for LpnSchedule {
    fn default() -> Self {
        Self {
            epsilon: 0.15,
            delta: 0.85,
            leaf: LeafRule::PolyLog,
            rule: LevelRule::Recursive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub dim: usize,
    pub subdim: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpnPlan {
    pub logical: usize,
    pub padded: usize,
    pub levels: Vec<Level>,
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl LpnSchedule {
    pub fn base(c: f64) -> Self {
        Self {
            rule: LevelRule::Base { c },
            ..Self::default()
        }
    }

    pub fn explicit(dims: Vec<usize>, rates: Vec<f64>) -> Self {
        Self {
            rule: LevelRule::Explicit { dims, rates },
            ..Self::default()
        }
    }

    pub fn leaf_threshold(&self, n: usize) -> usize {
        match self.leaf {
            LeafRule::PolyLog => (ceil_log2(n) * ceil_log2(n)).max(16),
            LeafRule::Power(g) => ((n as f64).powf(g).round() as usize).max(1),
            LeafRule::Fixed(t) => t.max(1),
        }
    }

    fn rate(&self, dim: usize, subdim: usize) -> f64 {
        let floor = 1.0 / (dim as f64 * dim as f64);
        (subdim as f64).powf(-self.delta).clamp(floor, 1.0)
    }

    fn validate(&self) -> Result<()> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(self.epsilon) || !open(self.delta) {
            return Err(Error::BadSchedule(format!(
                "epsilon {} and delta {} must lie in (0, 1)",
                self.epsilon, self.delta
            )));
        }
        if let LeafRule::Power(g) = self.leaf {
            if !open(g) {
                return Err(Error::BadSchedule(format!("gamma {g} not in (0, 1)")));
            }
        }
        Ok(())
    }

    /// Level dimensions and noise rates for logical dimension `n`.
    pub fn plan(&self, n: usize) -> Result<LpnPlan> {
        self.validate()?;
        if n == 0 {
            return Err(Error::BadSchedule("dimension must be >= 1".into()));
        }
        match &self.rule {
            LevelRule::Recursive => self.plan_recursive(n),
            LevelRule::Base { c } => Ok(self.plan_base(n, *c)),
            LevelRule::Explicit { dims, rates } => self.plan_explicit(n, dims, rates),
        }
    }

    fn plan_recursive(&self, n: usize) -> Result<LpnPlan> {
        let threshold = self.leaf_threshold(n);
        // Only the top level is padded; the search ends at the next power of
        // two at the latest, which always admits a chain.
        for padded in n..=n.next_power_of_two().max(n) {
            if let Some(levels) = self.chain(padded, threshold)? {
                return Ok(LpnPlan {
                    logical: n,
                    padded,
                    levels,
                });
            }
        }
        Err(Error::BadSchedule(format!(
            "no admissible padding for n = {n}"
        )))
    }

    fn chain(&self, top: usize, threshold: usize) -> Result<Option<Vec<Level>>> {
        let mut levels = Vec::new();
        let mut cur = top;
        while cur > threshold {
            let target = (cur as f64).powf(1.0 - self.epsilon).round() as usize;
            if target >= cur || target == 0 {
                return Err(Error::BadSchedule(format!(
                    "level {cur} does not shrink (next would be {target})"
                )));
            }
            let lo = target.div_ceil(2).max(1);
            let Some(d) = (lo..=target).rev().find(|d| cur % d == 0) else {
                return Ok(None);
            };
            levels.push(Level {
                dim: cur,
                subdim: d,
                rate: self.rate(cur, d),
            });
            cur = d;
        }
        Ok(Some(levels))
    }

    fn plan_base(&self, n: usize, c: f64) -> LpnPlan {
        let k = (n as f64).sqrt().ceil() as usize;
        let padded = k * n.div_ceil(k);
        let levels = if k < padded {
            let floor = 1.0 / (padded as f64 * padded as f64);
            let rate = ((k as f64).log2().powf(c) / k as f64).clamp(floor, 1.0);
            vec![Level {
                dim: padded,
                subdim: k,
                rate,
            }]
        } else {
            Vec::new()
        };
        LpnPlan {
            logical: n,
            padded,
            levels,
        }
    }

    fn plan_explicit(&self, n: usize, dims: &[usize], rates: &[f64]) -> Result<LpnPlan> {
        if dims.len() != rates.len() {
            return Err(Error::BadSchedule("one rate per level required".into()));
        }
        let mut levels = Vec::with_capacity(dims.len());
        let mut cur = n;
        for (&d, &rate) in dims.iter().zip(rates) {
            if d == 0 || d >= cur || cur % d != 0 {
                return Err(Error::BadSchedule(format!(
                    "level {d} must strictly divide {cur}"
                )));
            }
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(Error::BadSchedule(format!("rate {rate} not in (0, 1]")));
            }
            levels.push(Level {
                dim: cur,
                subdim: d,
                rate,
            });
            cur = d;
        }
        Ok(LpnPlan {
            logical: n,
            padded: n,
            levels,
        })
    }
}

/// Recursive trapdoor circuit: a dense leaf or `A·B + E` over child nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum LpnNode {
    Leaf(DenseMatrix),
    Composite {
        dim: usize,
        subdim: usize,
        a_blocks: Vec<LpnNode>,
        b_blocks: Vec<LpnNode>,
        noise: SparseMatrix,
    },
}

impl LpnNode {
    pub fn leaf(m: DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::BadShape(format!(
                "leaf {}x{} is not square",
                m.rows(),
                m.cols()
            )));
        }
        Ok(LpnNode::Leaf(m))
    }

    pub fn composite(
        a_blocks: Vec<LpnNode>,
        b_blocks: Vec<LpnNode>,
        noise: SparseMatrix,
    ) -> Result<Self> {
        let dim = noise.rows();
        let count = a_blocks.len();
        let subdim = a_blocks.first().map(LpnNode::dim).unwrap_or(0);
        if count == 0
            || b_blocks.len() != count
            || noise.cols() != dim
            || subdim * count != dim
            || a_blocks.iter().chain(&b_blocks).any(|c| c.dim() != subdim)
        {
            return Err(Error::BadShape(format!(
                "composite of dim {dim} needs {count} + {count} blocks of equal size dividing it"
            )));
        }
        let field = noise.field();
        for c in a_blocks.iter().chain(&b_blocks) {
            field.ensure_same(&c.field())?;
        }
        Ok(LpnNode::Composite {
            dim,
            subdim,
            a_blocks,
            b_blocks,
            noise,
        })
    }

    pub fn sample<R: Rng + ?Sized>(
        levels: &[Level],
        dim: usize,
        field: Field,
        rng: &mut R,
    ) -> Result<Self> {
        let Some((lv, rest)) = levels.split_first() else {
            return Ok(LpnNode::Leaf(DenseMatrix::random(field, dim, dim, rng)));
        };
        debug_assert_eq!(lv.dim, dim);
        let m = lv.dim / lv.subdim;
        let a_blocks = (0..m)
            .map(|_| Self::sample(rest, lv.subdim, field, rng))
            .collect::<Result<Vec<_>>>()?;
        let b_blocks = (0..m)
            .map(|_| Self::sample(rest, lv.subdim, field, rng))
            .collect::<Result<Vec<_>>>()?;
        // (p-1)/p: uniform noise
        let uniform = 1.0 - 1.0 / field.modulus() as f64;
        let noise = sample_bernoulli_sparse(rng, field, dim, dim, lv.rate.min(uniform))?;
        Ok(LpnNode::Composite {
            dim,
            subdim: lv.subdim,
            a_blocks,
            b_blocks,
            noise,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            LpnNode::Leaf(m) => m.rows(),
            LpnNode::Composite { dim, .. } => *dim,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            LpnNode::Leaf(m) => m.field(),
            LpnNode::Composite { noise, .. } => noise.field(),
        }
    }

    /// Number of composite levels on the path to a leaf.
    pub fn depth(&self) -> usize {
        match self {
            LpnNode::Leaf(_) => 0,
            LpnNode::Composite { a_blocks, .. } => 1 + a_blocks[0].depth(),
        }
    }

    /// Noise nonzeros over the whole tree.
    pub fn nnz(&self) -> usize {
        match self {
            LpnNode::Leaf(_) => 0,
            LpnNode::Composite {
                a_blocks,
                b_blocks,
                noise,
                ..
            } => {
                noise.nnz()
                    + a_blocks
                        .iter()
                        .chain(b_blocks)
                        .map(LpnNode::nnz)
                        .sum::<usize>()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            LpnNode::Leaf(_) => 1,
            LpnNode::Composite {
                a_blocks, b_blocks, ..
            } => a_blocks
                .iter()
                .chain(b_blocks)
                .map(LpnNode::leaf_count)
                .sum(),
        }
    }

    /// `M v` on a reduced slice: `A (Σ_j B_j v_j) + E v`.
    pub fn apply_raw(&self, v: &[u32], ops: &mut OpCount) -> Vec<u32> {
        match self {
            LpnNode::Leaf(m) => {
                let f = m.field();
                ops.muladds(m.rows() * m.cols());
                (0..m.rows()).map(|r| f.dot(m.row(r), v)).collect()
            }
            LpnNode::Composite {
                dim,
                subdim,
                a_blocks,
                b_blocks,
                noise,
            } => {
                let f = noise.field();
                let k = *subdim;
                let mut u = b_blocks[0].apply_raw(&v[..k], ops);
                for (j, b) in b_blocks.iter().enumerate().skip(1) {
                    let part = b.apply_raw(&v[j * k..(j + 1) * k], ops);
                    f.add_assign(&mut u, &part);
                    ops.adds += k as u64;
                }
                let mut out = Vec::with_capacity(*dim);
                for a in a_blocks {
                    out.extend(a.apply_raw(&u, ops));
                }
                noise.matvec_add_into(v, &mut out, ops);
                out
            }
        }
    }

    /// `M V` for a block of columns; same operations as column-wise [`apply_raw`](Self::apply_raw).
    pub fn apply_matrix_raw(&self, v: &DenseMatrix, ops: &mut OpCount) -> Result<DenseMatrix> {
        match self {
            LpnNode::Leaf(m) => {
                ops.muladds(m.rows() * m.cols() * v.cols());
                Ok(m.matmul(v)?)
            }
            LpnNode::Composite {
                subdim,
                a_blocks,
                b_blocks,
                noise,
                ..
            } => {
                let (k, c) = (*subdim, v.cols());
                let mut u = b_blocks[0].apply_matrix_raw(&v.submatrix(0, 0, k, c)?, ops)?;
                for (j, b) in b_blocks.iter().enumerate().skip(1) {
                    u = u.add(&b.apply_matrix_raw(&v.submatrix(j * k, 0, k, c)?, ops)?)?;
                    ops.adds += (k * c) as u64;
                }
                let parts = a_blocks
                    .iter()
                    .map(|a| a.apply_matrix_raw(&u, ops))
                    .collect::<Result<Vec<_>>>()?;
                let mut out = DenseMatrix::vstack(noise.field(), &parts)?;
                noise.matmul_add_into(v, &mut out, ops)?;
                Ok(out)
            }
        }
    }

    /// `vᵀ M` on a reduced slice: `(Σ_i v_iᵀ A_i) B + vᵀ E`.
    pub fn apply_left_raw(&self, v: &[u32], ops: &mut OpCount) -> Vec<u32> {
        match self {
            LpnNode::Leaf(m) => {
                let x = FVector::from_reduced(m.field(), v.to_vec());
                m.vecmat_counted(&x, ops)
                    .expect("leaf shape checked by caller")
                    .into_vec()
            }
            LpnNode::Composite {
                dim,
                subdim,
                a_blocks,
                b_blocks,
                noise,
            } => {
                let f = noise.field();
                let k = *subdim;
                let mut w = a_blocks[0].apply_left_raw(&v[..k], ops);
                for (i, a) in a_blocks.iter().enumerate().skip(1) {
                    let part = a.apply_left_raw(&v[i * k..(i + 1) * k], ops);
                    f.add_assign(&mut w, &part);
                    ops.adds += k as u64;
                }
                let mut out = Vec::with_capacity(*dim);
                for b in b_blocks {
                    out.extend(b.apply_left_raw(&w, ops));
                }
                noise.vecmat_add_into(v, &mut out, ops);
                out
            }
        }
    }

    /// Dense `A·B + E`, built from the children's materializations.
    pub fn materialize(&self, cap: usize) -> Result<DenseMatrix> {
        if self.dim() > cap {
            return Err(tdm_core::Error::TooLarge {
                dim: self.dim(),
                cap,
            }
            .into());
        }
        match self {
            LpnNode::Leaf(m) => Ok(m.clone()),
            LpnNode::Composite {
                a_blocks,
                b_blocks,
                noise,
                ..
            } => {
                let f = noise.field();
                let a = a_blocks
                    .iter()
                    .map(|c| c.materialize(cap))
                    .collect::<Result<Vec<_>>>()?;
                let b = b_blocks
                    .iter()
                    .map(|c| c.materialize(cap))
                    .collect::<Result<Vec<_>>>()?;
                let mut m = DenseMatrix::vstack(f, &a)?.matmul(&DenseMatrix::hstack(f, &b)?)?;
                noise.add_into_dense(&mut m)?;
                Ok(m)
            }
        }
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        match self {
            LpnNode::Leaf(m) => {
                w.u8(0);
                w.u64(m.rows() as u64);
                serial::write_dense_payload(w, m);
            }
            LpnNode::Composite {
                dim,
                subdim,
                a_blocks,
                b_blocks,
                noise,
            } => {
                w.u8(1);
                w.u64(*dim as u64);
                w.u64(*subdim as u64);
                w.u64(a_blocks.len() as u64);
                for c in a_blocks.iter().chain(b_blocks) {
                    c.write(w);
                }
                serial::write_sparse_payload(w, noise);
            }
        }
    }

    pub(crate) fn read(r: &mut ByteReader<'_>, field: Field) -> Result<Self> {
        match r.u8()? {
            0 => {
                let n = r.len()?;
                Ok(LpnNode::Leaf(serial::read_dense_payload(r, field, n, n)?))
            }
            1 => {
                let dim = r.len()?;
                let _subdim = r.len()?;
                let count = r.len()?;
                if count == 0 || count > dim {
                    return Err(tdm_core::Error::Format(format!("child count {count}")).into());
                }
                let mut children = (0..2 * count)
                    .map(|_| Self::read(r, field))
                    .collect::<Result<Vec<_>>>()?;
                let b_blocks = children.split_off(count);
                let noise = serial::read_sparse_payload(r, field, dim, dim)?;
                Self::composite(children, b_blocks, noise)
            }
            t => Err(tdm_core::Error::Format(format!("node tag {t}")).into()),
        }
    }
}

/// An LPN trapdoor of logical dimension `n`, stored at its padded dimension.
/// Inputs are zero-extended and outputs truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct LpnTrapdoor {
    family: String,
    logical: usize,
    root: LpnNode,
}

impl LpnTrapdoor {
    pub fn sample<R: Rng + ?Sized>(
        schedule: &LpnSchedule,
        n: usize,
        field: Field,
        rng: &mut R,
    ) -> Result<Self> {
        let plan = schedule.plan(n)?;
        let root = LpnNode::sample(&plan.levels, plan.padded, field, rng)?;
        Ok(Self {
            family: "lpn".into(),
            logical: n,
            root,
        })
    }

    pub fn from_root(root: LpnNode, logical: usize) -> Result<Self> {
        if logical == 0 || logical > root.dim() {
            return Err(Error::BadShape(format!(
                "logical dimension {logical} outside 1..={}",
                root.dim()
            )));
        }
        Ok(Self {
            family: "lpn".into(),
            logical,
            root,
        })
    }

    pub(crate) fn named(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    pub fn root(&self) -> &LpnNode {
        &self.root
    }

    pub fn padded_dim(&self) -> usize {
        self.root.dim()
    }

    fn check_len(&self, v: &FVector) -> Result<()> {
        self.root.field().ensure_same(&v.field())?;
        if v.len() != self.logical {
            return Err(shape(format!(
                "trapdoor of dim {} applied to length-{} vector",
                self.logical,
                v.len()
            )));
        }
        Ok(())
    }

    fn padded_input(&self, v: &FVector) -> Vec<u32> {
        let mut x = v.as_slice().to_vec();
        x.resize(self.padded_dim(), 0);
        x
    }

    pub fn materialize_capped(&self, cap: usize) -> Result<DenseMatrix> {
        if self.padded_dim() > cap {
            return Err(tdm_core::Error::TooLarge {
                dim: self.padded_dim(),
                cap,
            }
            .into());
        }
        let m = self.root.materialize(cap)?;
        if self.logical == self.padded_dim() {
            Ok(m)
        } else {
            Ok(m.submatrix(0, 0, self.logical, self.logical)?)
        }
    }

    pub(crate) fn write_body(&self, w: &mut ByteWriter) {
        self.root.write(w);
    }

    pub fn decode_body(r: &mut ByteReader<'_>, header: &Header) -> Result<Self> {
        let field = header.field()?;
        let root = LpnNode::read(r, field)?;
        if root.dim() as u64 != header.m {
            return Err(tdm_core::Error::Format("padded dimension mismatch".into()).into());
        }
        Self::from_root(root, header.n as usize)
    }
}

impl FieldTrapdoor for LpnTrapdoor {
    fn family(&self) -> &str {
        &self.family
    }

    fn field(&self) -> Field {
        self.root.field()
    }

    fn dim(&self) -> usize {
        self.logical
    }

    fn apply_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.check_len(v)?;
        let mut out = self.root.apply_raw(&self.padded_input(v), ops);
        out.truncate(self.logical);
        Ok(FVector::from_reduced(self.field(), out))
    }

    fn apply_matrix_counted(&self, v: &DenseMatrix, ops: &mut OpCount) -> Result<DenseMatrix> {
        self.root.field().ensure_same(&v.field())?;
        if v.rows() != self.logical {
            return Err(shape(format!(
                "trapdoor of dim {} times {}x{} matrix",
                self.logical,
                v.rows(),
                v.cols()
            )));
        }
        let out = self
            .root
            .apply_matrix_raw(&v.padded(self.padded_dim(), v.cols())?, ops)?;
        Ok(out.submatrix(0, 0, self.logical, v.cols())?)
    }

    fn supports_left(&self) -> bool {
        true
    }

    fn apply_left_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        self.check_len(v)?;
        let mut out = self.root.apply_left_raw(&self.padded_input(v), ops);
        out.truncate(self.logical);
        Ok(FVector::from_reduced(self.field(), out))
    }

    fn materialize(&self) -> Result<DenseMatrix> {
        self.materialize_capped(MATERIALIZE_CAP)
    }

    fn summary(&self) -> Summary {
        Summary::new(&self.family, self.logical, Some(self.field().modulus()))
            .with("padded_dim", self.padded_dim())
            .with("levels", self.root.depth())
            .with("leaves", self.root.leaf_count())
            .with("nnz", self.root.nnz())
    }

    fn encode(&self) -> Vec<u8> {
        let mut w = ByteWriter::new();
        Header {
            modulus: self.field().modulus() as u64,
            kind: Kind::LpnTrapdoor,
            n: self.logical as u64,
            m: self.padded_dim() as u64,
        }
        .write(&mut w);
        self.write_body(&mut w);
        w.into_bytes()
    }
}

pub struct LpnFamily {
    name: String,
    schedule: LpnSchedule,
}

impl LpnFamily {
    pub fn new(name: &str, schedule: LpnSchedule) -> Self {
        Self {
            name: name.to_string(),
            schedule,
        }
    }

    pub fn schedule(&self) -> &LpnSchedule {
        &self.schedule
    }
}

impl Family for LpnFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> Domain {
        Domain::Field
    }

    fn description(&self) -> &str {
        match self.schedule.rule {
            LevelRule::Base { .. } => "LPN base construction, k = ceil(sqrt n)",
            _ => "recursive LPN trapdoor M = A·B + E",
        }
    }

    fn sample(&self, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled> {
        let t = LpnTrapdoor::sample(&self.schedule, req.n, req.field, rng)?.named(&self.name);
        Ok(Sampled::Field(Box::new(t)))
    }
}
