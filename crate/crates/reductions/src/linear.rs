use tdm_core::freivalds::freivalds_verify_inverse;
use tdm_core::{split, DenseMatrix, FVector};
use tdm_trapdoor::Family;

use crate::config::ReductionConfig;
use crate::error::{Error, Result};
use crate::mask::sample_trapdoor;
use crate::oracle::{AvgCaseOracle, OracleKind, Query};
use crate::report::MaskForm;
use crate::run::{matrix_answer, square, vector_answer, Outcome, Run};

/// `A⁻¹` as `R M(A R)`, from an oracle that inverts a uniform element of
/// `GL_n` with probability `cfg.eps`.
///
/// Requires a family with left multiplication. A singular `A` always ends in
/// `ReductionFailed`.
pub fn wc_invert(
    oracle: &mut dyn AvgCaseOracle,
    family: &dyn Family,
    a: &DenseMatrix,
    cfg: &ReductionConfig,
) -> Result<Outcome<DenseMatrix>> {
    let (n, f) = square(a)?;
    let budget = cfg.invert_rounds(n, f.modulus());
    let probes = cfg.freivalds(f.modulus());
    let mut run = Run::start(oracle, OracleKind::Invert, cfg, "invert", budget)?;
    for round in 0..budget {
        let mut rng = split(&mut run.rng);
        run.report.rounds = round + 1;
        let r = sample_trapdoor(family, n, f, &mut rng)?;
        let ar = r.apply_left_matrix(a)?;
        let ans = run.ask(round, MaskForm::Right, Query::Invert(&ar))?;
        let Some(x) = matrix_answer(ans, n, n) else {
            run.verified(false);
            continue;
        };
        let candidate = r.apply_matrix(&x)?;
        let ok = freivalds_verify_inverse(a, &candidate, probes, &mut rng)?;
        run.verified(ok);
        if ok {
            return Ok(run.finish(candidate));
        }
    }
    Err(run.fail())
}

/// The unique `x` with `A x = b`, as `Q M(R A Q, R b)`.
///
/// Each candidate is checked exactly with one matrix-vector product.
pub fn wc_solve(
    oracle: &mut dyn AvgCaseOracle,
    family: &dyn Family,
    a: &DenseMatrix,
    b: &FVector,
    cfg: &ReductionConfig,
) -> Result<Outcome<FVector>> {
    let (n, f) = square(a)?;
    f.ensure_same(&b.field())?;
    if b.len() != n {
        return Err(Error::InvalidParam(format!(
            "right-hand side of length {} for n = {n}",
            b.len()
        )));
    }
    let budget = cfg.solve_rounds(n, f.modulus());
    let mut run = Run::start(oracle, OracleKind::Solve, cfg, "solve", budget)?;
    for round in 0..budget {
        let mut rng = split(&mut run.rng);
        run.report.rounds = round + 1;
        let r = sample_trapdoor(family, n, f, &mut rng)?;
        let q = sample_trapdoor(family, n, f, &mut rng)?;
        let raq = r.apply_matrix(&q.apply_left_matrix(a)?)?;
        let rb = r.apply(b)?;
        let ans = run.ask(round, MaskForm::Sandwich, Query::Solve(&raq, &rb))?;
        let Some(y) = vector_answer(ans, n) else {
            run.verified(false);
            continue;
        };
        let x = q.apply(&y)?;
        let ok = a.matvec(&x)? == *b;
        run.verified(ok);
        if ok {
            return Ok(run.finish(x));
        }
    }
    Err(run.fail())
}
