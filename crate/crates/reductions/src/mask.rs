//! Masking identities behind the multiplication reductions.

use rand::Rng;
use tdm_core::{DenseMatrix, FDiagonal, Field, Permutation, TdmRng};
use tdm_trapdoor::{Family, FieldTrapdoor, SampleRequest, Sampled};

use crate::error::{Error, Result};

/// Samples an `n x n` field trapdoor from `family`.
pub fn sample_trapdoor(
    family: &dyn Family,
    n: usize,
    field: Field,
    rng: &mut TdmRng,
) -> Result<Box<dyn FieldTrapdoor>> {
    match family.sample(&SampleRequest::new(n, field), rng)? {
        Sampled::Field(t) => Ok(t),
        Sampled::Real(_) => Err(Error::NotAField(family.name().to_string())),
    }
}

/// `X Tᵀ = (T Xᵀ)ᵀ`, using only right multiplication by `T`.
pub fn times_transpose(x: &DenseMatrix, t: &dyn FieldTrapdoor) -> Result<DenseMatrix> {
    Ok(t.apply_matrix(&x.transpose())?.transpose())
}

/// Additive mask `(R, Q)` with `R` and `Qᵀ` trapdoored.
///
/// `(A + R)(B + Q) - AQ - RB - RQ = AB`.
pub struct ProductMask {
    r: Box<dyn FieldTrapdoor>,
    qt: Box<dyn FieldTrapdoor>,
    r_dense: DenseMatrix,
    q_dense: DenseMatrix,
}

impl ProductMask {
    /// `Q = qtᵀ`
    pub fn new(r: Box<dyn FieldTrapdoor>, qt: Box<dyn FieldTrapdoor>) -> Result<Self> {
        let r_dense = r.materialize()?;
        let q_dense = qt.materialize()?.transpose();
        Ok(Self {
            r,
            qt,
            r_dense,
            q_dense,
        })
    }

    pub fn sample(family: &dyn Family, n: usize, field: Field, rng: &mut TdmRng) -> Result<Self> {
        let r = sample_trapdoor(family, n, field, rng)?;
        let qt = sample_trapdoor(family, n, field, rng)?;
        Self::new(r, qt)
    }

    pub fn r(&self) -> &DenseMatrix {
        &self.r_dense
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q_dense
    }

    /// `A + R`
    pub fn mask_left(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(a.add(&self.r_dense)?)
    }

    /// `B + Q`
    pub fn mask_right(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(b.add(&self.q_dense)?)
    }

    /// `W - AQ - RB - RQ`, each product through a trapdoor.
    pub fn unmask(&self, a: &DenseMatrix, b: &DenseMatrix, w: &DenseMatrix) -> Result<DenseMatrix> {
        let aq = times_transpose(a, self.qt.as_ref())?;
        let rb = self.r.apply_matrix(b)?;
        let rq = self.r.apply_matrix(&self.q_dense)?;
        Ok(w.sub(&aq)?.sub(&rb)?.sub(&rq)?)
    }
}

/// Monomial scrambling `(P, P′, D)` of the error-corrected reduction.
///
/// `D P M(P⁻¹ D⁻¹ X, Y P′⁻¹) P′ = XY + D P E P′` for `M(X′, Y′) = X′Y′ + E`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scramble {
    p: Permutation,
    p2: Permutation,
    d: FDiagonal,
    d_inv: FDiagonal,
}

impl Scramble {
    pub fn new(p: Permutation, p2: Permutation, d: FDiagonal) -> Result<Self> {
        if p.len() != d.len() || p2.len() != d.len() {
            return Err(Error::InvalidParam(
                "scramble factors of different sizes".into(),
            ));
        }
        let d_inv = d.inverse()?;
        Ok(Self { p, p2, d, d_inv })
    }

    pub fn sample<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> Self {
        let p = Permutation::random(n, rng);
        let p2 = Permutation::random(n, rng);
        let d = FDiagonal::random_invertible(field, n, rng);
        Self::new(p, p2, d).expect("sizes agree and D is invertible")
    }

    /// `P⁻¹ D⁻¹ X`
    pub fn left_input(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(self.p.inverse().permute_rows(&self.d_inv.scale_rows(x)?)?)
    }

    /// `Y P′⁻¹`
    pub fn right_input(&self, y: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(self.p2.inverse().permute_cols_right(y)?)
    }

    /// `D P W P′`
    pub fn output(&self, w: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(self
            .d
            .scale_rows(&self.p.permute_rows(&self.p2.permute_cols_right(w)?)?)?)
    }
}
