//! Randomized verification of claimed matrix products.

use rand::Rng;

use crate::dense::DenseMatrix;
use crate::error::{shape, Result};
use crate::vector::FVector;

/// Checks `C == A B` with `rounds` random probes `A(B r) == C r`.
///
/// Never rejects a true product; accepts a false one with probability at most
/// `(1/p)^rounds`. Each round costs three matrix-vector products.
pub fn freivalds_verify<R: Rng + ?Sized>(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &DenseMatrix,
    rounds: usize,
    rng: &mut R,
) -> Result<bool> {
    let f = a.field();
    f.ensure_same(&b.field())?;
    f.ensure_same(&c.field())?;
    if a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols() {
        return Err(shape(format!(
            "freivalds on {}x{} · {}x{} = {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    verify_with(
        |r| a.matvec(&b.matvec(r)?),
        |r| c.matvec(r),
        f,
        b.cols(),
        rounds,
        rng,
    )
}

/// Checks `A X == I` for a claimed inverse `X`.
pub fn freivalds_verify_inverse<R: Rng + ?Sized>(
    a: &DenseMatrix,
    x: &DenseMatrix,
    rounds: usize,
    rng: &mut R,
) -> Result<bool> {
    if !a.is_square() || a.rows() != x.rows() || !x.is_square() {
        return Err(shape("inverse check needs equal square matrices"));
    }
    verify_with(
        |r| a.matvec(&x.matvec(r)?),
        |r| Ok(r.clone()),
        a.field(),
        a.cols(),
        rounds,
        rng,
    )
}

/// Generic probe loop: accepts iff `lhs(r) == rhs(r)` for every round.
pub fn verify_with<R: Rng + ?Sized>(
    lhs: impl Fn(&FVector) -> Result<FVector>,
    rhs: impl Fn(&FVector) -> Result<FVector>,
    field: crate::field::Field,
    dim: usize,
    rounds: usize,
    rng: &mut R,
) -> Result<bool> {
    if rounds == 0 {
        return Err(crate::error::Error::InvalidParam(
            "rounds must be >= 1".into(),
        ));
    }
    for _ in 0..rounds {
        let r = FVector::random(field, dim, rng);
        if lhs(&r)? != rhs(&r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Round count for a false-accept budget of 2^-40: `ceil(40 / log2 p)`.
pub fn default_rounds(p: u32) -> usize {
    (40.0 / (p as f64).log2()).ceil().max(1.0) as usize
}
