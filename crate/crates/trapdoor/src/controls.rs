//! Dense reference "families" used to calibrate the statistics suite.

use tdm_core::serial::{self, ByteReader, Header};
use tdm_core::{DenseMatrix, FVector, Field, OpCount, TdmRng};

use crate::error::Result;
use crate::family::{Domain, Family, FieldTrapdoor, SampleRequest, Sampled, Summary};

/// An explicit matrix with no fast circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTrapdoor {
    name: String,
    m: DenseMatrix,
}

impl DenseTrapdoor {
    pub fn new(name: &str, m: DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(crate::error::Error::BadShape(
                "dense trapdoor must be square".into(),
            ));
        }
        Ok(Self {
            name: name.to_string(),
            m,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.m
    }

    pub fn decode_body(r: &mut ByteReader<'_>, header: &Header) -> Result<Self> {
        let m =
            serial::read_dense_payload(r, header.field()?, header.n as usize, header.m as usize)?;
        Self::new("dense", m)
    }
}

impl FieldTrapdoor for DenseTrapdoor {
    fn family(&self) -> &str {
        &self.name
    }

    fn field(&self) -> Field {
        self.m.field()
    }

    fn dim(&self) -> usize {
        self.m.rows()
    }

    fn apply_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        Ok(self.m.matvec_counted(v, ops)?)
    }

    fn supports_left(&self) -> bool {
        true
    }

    fn apply_left_counted(&self, v: &FVector, ops: &mut OpCount) -> Result<FVector> {
        Ok(self.m.vecmat_counted(v, ops)?)
    }

    fn apply_matrix_counted(&self, v: &DenseMatrix, ops: &mut OpCount) -> Result<DenseMatrix> {
        ops.muladds(self.m.rows() * self.m.cols() * v.cols());
        Ok(self.m.matmul(v)?)
    }

    fn apply_left_matrix(&self, v: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(v.matmul(&self.m)?)
    }

    fn materialize(&self) -> Result<DenseMatrix> {
        Ok(self.m.clone())
    }

    fn summary(&self) -> Summary {
        Summary::new(&self.name, self.dim(), Some(self.field().modulus()))
    }

    fn encode(&self) -> Vec<u8> {
        serial::encode_dense(&self.m)
    }
}

/// Uniformly random dense matrices.
pub struct UniformFamily;

impl Family for UniformFamily {
    fn name(&self) -> &str {
        "uniform"
    }

    fn domain(&self) -> Domain {
        Domain::Field
    }

    fn description(&self) -> &str {
        "uniform dense control"
    }

    fn sample(&self, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled> {
        let m = DenseMatrix::random(req.field, req.n, req.n, rng);
        Ok(Sampled::Field(Box::new(DenseTrapdoor::new("uniform", m)?)))
    }
}

/// The all-zeros matrix: fails every uniformity test.
pub struct ZerosFamily;

impl Family for ZerosFamily {
    fn name(&self) -> &str {
        "zeros"
    }

    fn domain(&self) -> Domain {
        Domain::Field
    }

    fn description(&self) -> &str {
        "all-zeros adversarial control"
    }

    fn sample(&self, req: &SampleRequest, _rng: &mut TdmRng) -> Result<Sampled> {
        let m = DenseMatrix::zeros(req.field, req.n, req.n);
        Ok(Sampled::Field(Box::new(DenseTrapdoor::new("zeros", m)?)))
    }
}
