use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use tdm_core::serial::{ByteReader, ByteWriter, Header, Kind};
use tdm_core::{OpCount, TdmRng};

use super::kac::{default_steps, RotationChain};
use super::matrix::{singular_values, symmetric_eigenvalues, RealMatrix};
use crate::error::{shape, Error, Result};
use crate::family::{Domain, Family, RealLinearMap, SampleRequest, Sampled, Summary};

/// Law of the diagonal factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DiagSampler {
    Ones,
    Fixed(Vec<f64>),
    /// Singular values of an `n x n` standard Gaussian matrix, descending.
    GaussianSpectrum,
    /// Eigenvalues of `(A + Aᵀ)/√2` for standard Gaussian `A`, descending.
    GoeSpectrum,
}

impl DiagSampler {
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            DiagSampler::Ones => Ok(vec![1.0; n]),
            DiagSampler::Fixed(d) if d.len() == n => Ok(d.clone()),
            DiagSampler::Fixed(d) => Err(shape(format!(
                "fixed diagonal has length {}, need {n}",
                d.len()
            ))),
            DiagSampler::GaussianSpectrum => Ok(singular_values(&gaussian_matrix(n, rng))),
            DiagSampler::GoeSpectrum => {
                let a = gaussian_matrix(n, rng);
                let s = std::f64::consts::SQRT_2;
                let sym = RealMatrix::from_fn(n, n, |r, c| (a.get(r, c) + a.get(c, r)) / s);
                symmetric_eigenvalues(&sym)
            }
        }
    }
}

pub fn gaussian_spectrum_sampler<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    singular_values(&gaussian_matrix(n, rng))
}

fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    RealMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaarMode {
    /// `O1 · D · O2`
    TwoSided,
    /// `O · D · O⁻¹`
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarInvariantSampler {
    pub diag: DiagSampler,
    pub mode: HaarMode,
}

impl HaarInvariantSampler {
    pub fn new(diag: DiagSampler, mode: HaarMode) -> Self {
        Self { diag, mode }
    }

    /// Both chains get `t` steps.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, t: usize, rng: &mut R) -> Result<RealTrapdoor> {
        let diag = self.diag.sample(n, rng)?;
        let left = RotationChain::sample(n, t, rng)?;
        let right = match self.mode {
            HaarMode::TwoSided => Some(RotationChain::sample(n, t, rng)?),
            HaarMode::Symmetric => None,
        };
        RealTrapdoor::new(left, diag, right)
    }
}

/// `L · diag · R`, with `R = L⁻¹` when `right` is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealTrapdoor {
    left: RotationChain,
    diag: Vec<f64>,
    right: Option<RotationChain>,
}

impl RealTrapdoor {
    pub fn new(left: RotationChain, diag: Vec<f64>, right: Option<RotationChain>) -> Result<Self> {
        let n = left.dim();
        if diag.len() != n || right.as_ref().is_some_and(|r| r.dim() != n) {
            return Err(shape(format!("factors of mismatched dimension around {n}")));
        }
        Ok(Self { left, diag, right })
    }

    pub fn left(&self) -> &RotationChain {
        &self.left
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn right(&self) -> Option<&RotationChain> {
        self.right.as_ref()
    }

    pub fn mode(&self) -> HaarMode {
        if self.right.is_some() {
            HaarMode::TwoSided
        } else {
            HaarMode::Symmetric
        }
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.diag.len() {
            return Err(shape(format!(
                "trapdoor of dim {} applied to length-{} vector",
                self.diag.len(),
                v.len()
            )));
        }
        Ok(())
    }

    pub fn decode_body(r: &mut ByteReader<'_>, header: &Header) -> Result<Self> {
        let n = header.n as usize;
        let symmetric = match r.u8()? {
            0 => false,
            1 => true,
            t => return Err(tdm_core::Error::Format(format!("haar mode {t}")).into()),
        };
        let left = RotationChain::read(r, n, header.m as usize)?;
        let diag = r.f64s(n)?;
        let right = if symmetric {
            None
        } else {
            let t = r.len()?;
            Some(RotationChain::read(r, n, t)?)
        };
        Self::new(left, diag, right)
    }
}

impl RealLinearMap for RealTrapdoor {
    fn family(&self) -> &str {
        match self.mode() {
            HaarMode::TwoSided => "haar2",
            HaarMode::Symmetric => "haarsym",
        }
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_counted(&self, v: &[f64], ops: &mut OpCount) -> Result<Vec<f64>> {
        self.check(v)?;
        let mut x = v.to_vec();
        match &self.right {
            Some(r) => r.apply_in_place(&mut x, ops),
            None => self.left.apply_inverse_in_place(&mut x, ops),
        }
        for (xi, d) in x.iter_mut().zip(&self.diag) {
            *xi *= d;
        }
        ops.muls += x.len() as u64;
        self.left.apply_in_place(&mut x, ops);
        Ok(x)
    }

    fn apply_inverse(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(v)?;
        if self.diag.contains(&0.0) {
            return Err(Error::SingularDiag);
        }
        let mut ops = OpCount::default();
        let mut x = v.to_vec();
        self.left.apply_inverse_in_place(&mut x, &mut ops);
        for (xi, d) in x.iter_mut().zip(&self.diag) {
            *xi /= d;
        }
        match &self.right {
            Some(r) => r.apply_inverse_in_place(&mut x, &mut ops),
            None => self.left.apply_in_place(&mut x, &mut ops),
        }
        Ok(x)
    }

    fn materialize(&self) -> Result<RealMatrix> {
        let l = self.left.materialize()?;
        let r = match &self.right {
            Some(r) => r.materialize()?,
            None => self.left.inverse().materialize()?,
        };
        let n = self.diag.len();
        let ld = RealMatrix::from_fn(n, n, |i, j| l.get(i, j) * self.diag[j]);
        ld.matmul(&r)
    }

    fn summary(&self) -> Summary {
        Summary::new(self.family(), self.dim(), None)
            .with("steps", self.left.len())
            .with(
                "right_steps",
                self.right.as_ref().map_or(0, RotationChain::len),
            )
    }

    fn encode(&self) -> Vec<u8> {
        let mut w = ByteWriter::new();
        Header {
            modulus: 0,
            kind: Kind::HaarTrapdoor,
            n: self.dim() as u64,
            m: self.left.len() as u64,
        }
        .write(&mut w);
        w.u8(self.right.is_none() as u8);
        self.left.write(&mut w);
        w.f64s(&self.diag);
        if let Some(r) = &self.right {
            w.u64(r.len() as u64);
            r.write(&mut w);
        }
        w.into_bytes()
    }
}

pub struct HaarFamily {
    name: String,
    sampler: HaarInvariantSampler,
}

impl HaarFamily {
    /// Two-sided families use the Gaussian spectrum, symmetric ones the GOE spectrum.
    pub fn new(name: &str, mode: HaarMode) -> Self {
        let diag = match mode {
            HaarMode::TwoSided => DiagSampler::GaussianSpectrum,
            HaarMode::Symmetric => DiagSampler::GoeSpectrum,
        };
        Self::with_sampler(name, HaarInvariantSampler::new(diag, mode))
    }

    pub fn with_sampler(name: &str, sampler: HaarInvariantSampler) -> Self {
        Self {
            name: name.to_string(),
            sampler,
        }
    }
}

impl Family for HaarFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> Domain {
        Domain::Real
    }

    fn description(&self) -> &str {
        match self.sampler.mode {
            HaarMode::TwoSided => "O1·D·O2 with Kac-walk rotations",
            HaarMode::Symmetric => "O·D·O⁻¹ with a Kac-walk rotation",
        }
    }

    fn sample(&self, req: &SampleRequest, rng: &mut TdmRng) -> Result<Sampled> {
        let t = req.steps.unwrap_or_else(|| default_steps(req.n));
        Ok(Sampled::Real(Box::new(self.sampler.sample(req.n, t, rng)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tdm_core::rng_from_seed;

    #[test]
    fn one_by_one_spectrum_is_absolute_normal() {
        let mut a = rng_from_seed(5);
        let mut b = rng_from_seed(5);
        let z: f64 = b.sample(StandardNormal);
        assert_eq!(gaussian_spectrum_sampler(1, &mut a), vec![z.abs()]);
    }

    #[test]
    fn spectrum_sorted_nonnegative() {
        let d = gaussian_spectrum_sampler(20, &mut rng_from_seed(1));
        assert!(d.iter().all(|&x| x >= 0.0));
        assert!(d.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn ones_with_empty_right_is_left_chain() {
        let mut rng = rng_from_seed(2);
        let left = RotationChain::sample(16, 200, &mut rng).unwrap();
        let t = RealTrapdoor::new(
            left.clone(),
            vec![1.0; 16],
            Some(RotationChain::identity(16)),
        )
        .unwrap();
        let v: Vec<f64> = (0..16).map(|i| i as f64 - 3.5).collect();
        assert_eq!(t.apply(&v).unwrap(), left.apply(&v).unwrap());
    }

    #[test]
    fn zero_diagonal_has_no_inverse() {
        let t = RealTrapdoor::new(RotationChain::identity(3), vec![1.0, 0.0, 2.0], None).unwrap();
        assert_eq!(t.apply_inverse(&[1.0, 1.0, 1.0]), Err(Error::SingularDiag));
        assert!(DiagSampler::Fixed(vec![1.0])
            .sample(3, &mut rng_from_seed(0))
            .is_err());
    }
}
