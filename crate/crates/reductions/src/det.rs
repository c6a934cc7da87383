use tdm_core::{split, DenseMatrix};
use tdm_trapdoor::Family;

use crate::config::ReductionConfig;
use crate::error::{Error, Result};
use crate::mask::sample_trapdoor;
use crate::oracle::{AvgCaseOracle, OracleKind, Query};
use crate::qp::QpTable;
use crate::report::MaskForm;
use crate::run::{scalar_answer, square, Outcome, Run};

/// `det A` over `F_p`, `p > 2`, from an oracle correct with probability at
/// least `(3 + 2 q_p)/4 + eps`.
///
/// Collects `M(R A) / M(R)` over iterations with `M(R) != 0` and returns a
/// value occurring at least `(1/2 + eps) t` times, else 0.
pub fn wc_det_largep(
    oracle: &mut dyn AvgCaseOracle,
    family: &dyn Family,
    a: &DenseMatrix,
    cfg: &ReductionConfig,
) -> Result<Outcome<u32>> {
    let (n, f) = square(a)?;
    if f.modulus() == 2 {
        return Err(Error::InvalidParam(
            "wc_det_largep needs p > 2; use wc_det_f2".into(),
        ));
    }
    let t = cfg.det_largep_iters(n, f.modulus());
    let mut run = Run::start(oracle, OracleKind::Determinant, cfg, "det_largep", t)?;
    let mut ratios = Vec::with_capacity(t);
    for round in 0..t {
        let mut rng = split(&mut run.rng);
        run.report.rounds = round + 1;
        let r = sample_trapdoor(family, n, f, &mut rng)?;
        let rd = r.materialize()?;
        let m_r = scalar_answer(run.ask(round, MaskForm::Fresh, Query::Determinant(&rd))?);
        let Some(m_r) = m_r.filter(|&x| x != 0) else {
            run.report.skipped += 1;
            continue;
        };
        let ra = r.apply_matrix(a)?;
        if let Some(m_ra) =
            scalar_answer(run.ask(round, MaskForm::Left, Query::Determinant(&ra))?)
        {
            ratios.push(f.div(m_ra, m_r)?);
        }
    }
    ratios.sort_unstable();
    let mut best = (0usize, 0u32);
    for chunk in ratios.chunk_by(|x, y| x == y) {
        if chunk.len() > best.0 {
            best = (chunk.len(), chunk[0]);
        }
    }
    let threshold = (0.5 + cfg.eps) * t as f64;
    run.report.counter = Some(best.0);
    run.report.threshold = Some(threshold);
    let value = if best.0 as f64 >= threshold {
        best.1
    } else {
        0
    };
    Ok(run.finish(value))
}

/// `det A` over `F_2` from an oracle correct with probability at least
/// `(2 + q_2)/3 + eps`.
///
/// Counts iterations with `M(R) != M(R A)` and returns 1 iff the count stays
/// below `(2/3)(1 - q_2) t`.
pub fn wc_det_f2(
    oracle: &mut dyn AvgCaseOracle,
    family: &dyn Family,
    a: &DenseMatrix,
    cfg: &ReductionConfig,
) -> Result<Outcome<u32>> {
    let (n, f) = square(a)?;
    if f.modulus() != 2 {
        return Err(Error::InvalidParam("wc_det_f2 needs p = 2".into()));
    }
    let t = cfg.det_f2_iters(n);
    let mut run = Run::start(oracle, OracleKind::Determinant, cfg, "det_f2", t)?;
    let mut count = 0usize;
    for round in 0..t {
        let mut rng = split(&mut run.rng);
        run.report.rounds = round + 1;
        let r = sample_trapdoor(family, n, f, &mut rng)?;
        let rd = r.materialize()?;
        let m_r = scalar_answer(run.ask(round, MaskForm::Fresh, Query::Determinant(&rd))?);
        let ra = r.apply_matrix(a)?;
        let m_ra = scalar_answer(run.ask(round, MaskForm::Left, Query::Determinant(&ra))?);
        if m_r != m_ra {
            count += 1;
        }
    }
    let threshold = 2.0 / 3.0 * (1.0 - QpTable::default().get(2)) * t as f64;
    run.report.counter = Some(count);
    run.report.threshold = Some(threshold);
    let value = u32::from((count as f64) < threshold);
    Ok(run.finish(value))
}
