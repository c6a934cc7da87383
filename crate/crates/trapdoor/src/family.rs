use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use tdm_core::{DenseMatrix, FVector, Field, OpCount, TdmRng};

use crate::error::{shape, Error, Result};
use crate::real::RealMatrix;

/// Largest dimension any `materialize` will build.
pub const MATERIALIZE_CAP: usize = 4096;

/// Machine-readable description of a sampled trapdoor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub family: String,
    pub dim: usize,
    /// `None` for real-valued families.
    pub modulus: Option<u32>,
    pub stats: BTreeMap<&'static str, u64>,
}

impl Summary {
    pub fn new(family: &str, dim: usize, modulus: Option<u32>) -> Self {
        Self {
            family: family.to_string(),
            dim,
            modulus,
            stats: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &'static str, value: impl TryInto<u64>) -> Self {
        self.stats.insert(key, value.try_into().unwrap_or(u64::MAX));
        self
    }
}

/// A square `n x n` matrix over F_p together with its fast-multiplication circuit.
pub trait FieldTrapdoor: fmt::Debug + Send + Sync {
    fn family(&self) -> &str;
    fn field(&self) -> Field;
    fn dim(&self) -> usize;

    /// `M v`, tallying scalar operations into `ops`.
    fn apply_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector>;

    fn apply(&self, v: &FVector) -> Result<FVector> {
        self.apply_counted(v, &mut OpCount::default())
    }

    fn supports_left(&self) -> bool {
        false
    }

    /// `vᵀ M`
    fn apply_left_counted(&self, _v: &FVector, _ops: &mut OpCount) -> Result<FVector> {
        Err(Error::Unsupported {
            family: self.family().to_string(),
            op: "left multiplication",
        })
    }

    fn apply_left(&self, v: &FVector) -> Result<FVector> {
        self.apply_left_counted(v, &mut OpCount::default())
    }

    /// `M V`, one column at a time.
    fn apply_matrix_counted(&self, v: &DenseMatrix, ops: &mut OpCount) -> Result<DenseMatrix> {
        if v.rows() != self.dim() {
            return Err(shape(format!(
                "trapdoor of dim {} times {}x{} matrix",
                self.dim(),
                v.rows(),
                v.cols()
            )));
        }
        let cols = v
            .columns()
            .iter()
            .map(|c| self.apply_counted(c, ops))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix::from_columns(self.field(), self.dim(), &cols)?)
    }

    fn apply_matrix(&self, v: &DenseMatrix) -> Result<DenseMatrix> {
        self.apply_matrix_counted(v, &mut OpCount::default())
    }

    /// `V M`, one row at a time.
    fn apply_left_matrix(&self, v: &DenseMatrix) -> Result<DenseMatrix> {
        if v.cols() != self.dim() {
            return Err(shape(format!(
                "{}x{} matrix times trapdoor of dim {}",
                v.rows(),
                v.cols(),
                self.dim()
            )));
        }
        let mut ops = OpCount::default();
        let rows = (0..v.rows())
            .map(|r| {
                self.apply_left_counted(&v.row_vector(r), &mut ops)
                    .map(FVector::into_vec)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix::from_rows(self.field(), &rows)?)
    }

    /// Dense equivalent, for testing. Fails above [`MATERIALIZE_CAP`].
    fn materialize(&self) -> Result<DenseMatrix>;

    fn summary(&self) -> Summary;

    /// TDM1 encoding.
    fn encode(&self) -> Vec<u8>;
}

/// A square real matrix with fast application of itself and its inverse.
pub trait RealLinearMap: fmt::Debug + Send + Sync {
    fn family(&self) -> &str;
    fn dim(&self) -> usize;
    fn apply_counted(&self, v: &[f64], ops: &mut OpCount) -> Result<Vec<f64>>;

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_counted(v, &mut OpCount::default())
    }

    fn apply_inverse(&self, v: &[f64]) -> Result<Vec<f64>>;
    fn materialize(&self) -> Result<RealMatrix>;
    fn summary(&self) -> Summary;
    fn encode(&self) -> Vec<u8>;
}

#[derive(Debug)]
pub enum Sampled {
    Field(Box<dyn FieldTrapdoor>),
    Real(Box<dyn RealLinearMap>),
}

impl Sampled {
    pub fn dim(&self) -> usize {
        match self {
            Sampled::Field(t) => t.dim(),
            Sampled::Real(t) => t.dim(),
        }
    }

    pub fn family(&self) -> &str {
        match self {
            Sampled::Field(t) => t.family(),
            Sampled::Real(t) => t.family(),
        }
    }

    pub fn summary(&self) -> Summary {
        match self {
            Sampled::Field(t) => t.summary(),
            Sampled::Real(t) => t.summary(),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match self {
            Sampled::Field(t) => t.encode(),
            Sampled::Real(t) => t.encode(),
        }
    }

    pub fn as_field(&self) -> Option<&dyn FieldTrapdoor> {
        match self {
            Sampled::Field(t) => Some(t.as_ref()),
            Sampled::Real(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<&dyn RealLinearMap> {
        match self {
            Sampled::Real(t) => Some(t.as_ref()),
            Sampled::Field(_) => None,
        }
    }

    pub fn into_field(self) -> Option<Box<dyn FieldTrapdoor>> {
        match self {
            Sampled::Field(t) => Some(t),
            Sampled::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Field,
    Real,
}

/// Per-call knobs shared by every family; anything else is fixed at
/// registration time.
#[derive(Debug, Clone, Copy)]
pub struct SampleRequest {
    pub n: usize,
    /// Ignored by real families.
    pub field: Field,
    /// Walk length for Kac-based families.
    pub steps: Option<usize>,
}

impl SampleRequest {
    pub fn new(n: usize, field: Field) -> Self {
        Self {
            n,
            field,
            steps: None,
        }
    }
}

pub trait Family: Send + Sync {
    fn name(&self) -> &str;
    fn domain(&self) -> Domain;
    fn description(&self) -> &str;
    fn sample(&self, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled>;
}

/// Families addressable by name.
pub struct Registry {
    families: BTreeMap<String, Box<dyn Family>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    /// The shipped families plus the `uniform` and `zeros` controls.
    pub fn builtin() -> Self {
        use crate::code::McElieceFamily;
        use crate::controls::{UniformFamily, ZerosFamily};
        use crate::lpn::{LpnFamily, LpnSchedule};
        use crate::real::{HaarFamily, HaarMode, KacFamily};

        let mut r = Self::empty();
        r.register(LpnFamily::new("lpn", LpnSchedule::default()));
        r.register(LpnFamily::new("lpn-base", LpnSchedule::base(2.0)));
        r.register(McElieceFamily::new("mceliece", false));
        r.register(McElieceFamily::new("mceliece-rec", true));
        r.register(KacFamily);
        r.register(HaarFamily::new("haar2", HaarMode::TwoSided));
        r.register(HaarFamily::new("haarsym", HaarMode::Symmetric));
        r.register(UniformFamily);
        r.register(ZerosFamily);
        r
    }

    /// Replaces any family of the same name.
    pub fn register(&mut self, family: impl Family + 'static) {
        self.families
            .insert(family.name().to_string(), Box::new(family));
    }

    pub fn get(&self, name: &str) -> Result<&dyn Family> {
        self.families
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Family> {
        self.families.values().map(|b| b.as_ref())
    }

    pub fn sample(&self, name: &str, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled> {
        self.get(name)?.sample(req, rng)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.families.keys()).finish()
    }
}
