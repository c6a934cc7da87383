use tdm_core::{freivalds_verify, split, DenseMatrix};
use tdm_trapdoor::Family;

use crate::config::ReductionConfig;
use crate::error::Result;
use crate::mask::{ProductMask, Scramble};
use crate::oracle::{AvgCaseOracle, OracleKind, Query};
use crate::report::MaskForm;
use crate::run::{matrix_answer, square_pair, Outcome, Run};

/// `A B` from an oracle that is exactly right on a uniform pair with
/// probability `cfg.eps`.
///
/// Each round queries `M(A + R, B + Q)`, unmasks and Freivalds-checks the
/// candidate. Needs right multiplication only (`Q` is a transposed sample).
pub fn wc_matmul_exact(
    oracle: &mut dyn AvgCaseOracle,
    family: &dyn Family,
    a: &DenseMatrix,
    b: &DenseMatrix,
    cfg: &ReductionConfig,
) -> Result<Outcome<DenseMatrix>> {
    let (n, f) = square_pair(a, b)?;
    let budget = cfg.matmul_exact_rounds(n);
    let probes = cfg.freivalds(f.modulus());
    let mut run = Run::start(oracle, OracleKind::Matmul, cfg, "matmul_exact", budget)?;
    for round in 0..budget {
        let mut rng = split(&mut run.rng);
        run.report.rounds = round + 1;
        let mask = ProductMask::sample(family, n, f, &mut rng)?;
        let x = mask.mask_left(a)?;
        let y = mask.mask_right(b)?;
        let ans = run.ask(round, MaskForm::Sum, Query::Matmul(&x, &y))?;
        let Some(w) = matrix_answer(ans, n, n) else {
            run.verified(false);
            continue;
        };
        let c = mask.unmask(a, b, &w)?;
        let ok = freivalds_verify(a, b, &c, probes, &mut rng)?;
        run.verified(ok);
        if ok {
            return Ok(run.finish(c));
        }
    }
    Err(run.fail())
}

/// `A B` from an oracle whose expected entrywise distance from the truth is
/// at most `(1 - 1/p - eps) n²`.
///
/// Repetitions are scrambled by fresh `(R, Q, P, P′, D)` so each output entry
/// is right with probability above `1/p` and otherwise uniform on the wrong
/// values; the answer is the entrywise plurality, ties to the smallest value.
pub fn wc_matmul_errorcorrect(
    oracle: &mut dyn AvgCaseOracle,
    family: &dyn Family,
    a: &DenseMatrix,
    b: &DenseMatrix,
    cfg: &ReductionConfig,
) -> Result<Outcome<DenseMatrix>> {
    let (n, f) = square_pair(a, b)?;
    let reps = cfg.errorcorrect_reps(n, f.modulus());
    let mut run = Run::start(oracle, OracleKind::Matmul, cfg, "matmul_errorcorrect", reps)?;
    let mut candidates: Vec<Vec<u32>> = Vec::with_capacity(reps);
    for round in 0..reps {
        let mut rng = split(&mut run.rng);
        run.report.rounds = round + 1;
        let mask = ProductMask::sample(family, n, f, &mut rng)?;
        let s = Scramble::sample(n, f, &mut rng);
        let x = s.left_input(&mask.mask_left(a)?)?;
        let y = s.right_input(&mask.mask_right(b)?)?;
        let ans = run.ask(round, MaskForm::ScaledSum, Query::Matmul(&x, &y))?;
        if let Some(w) = matrix_answer(ans, n, n) {
            candidates.push(mask.unmask(a, b, &s.output(&w)?)?.into_vec());
        }
    }
    if candidates.is_empty() {
        return Err(run.fail());
    }
    let (data, ties) = plurality(&candidates, n * n);
    run.report.ties = ties;
    Ok(run.finish(DenseMatrix::from_reduced(f, n, n, data)))
}

/// Entrywise most frequent value, ties broken toward the smallest; also
/// returns the number of tied entries.
pub fn plurality(candidates: &[Vec<u32>], len: usize) -> (Vec<u32>, usize) {
    let mut out = Vec::with_capacity(len);
    let mut ties = 0;
    let mut column = Vec::with_capacity(candidates.len());
    for e in 0..len {
        column.clear();
        column.extend(candidates.iter().map(|c| c[e]));
        column.sort_unstable();
        let (mut best, mut best_count, mut tied) = (column[0], 0usize, false);
        let mut i = 0;
        while i < column.len() {
            let v = column[i];
            let run = column[i..].iter().take_while(|&&x| x == v).count();
            if run > best_count {
                (best, best_count, tied) = (v, run, false);
            } else if run == best_count {
                tied = true;
            }
            i += run;
        }
        ties += tied as usize;
        out.push(best);
    }
    (out, ties)
}

#[cfg(test)]
mod tests {
    use super::plurality;

    #[test]
    fn plurality_votes() {
        let c = vec![vec![3, 1, 2], vec![3, 2, 4], vec![1, 2, 2], vec![1, 0, 4]];
        let (v, ties) = plurality(&c, 3);
        assert_eq!(v, vec![1, 2, 2]);
        assert_eq!(ties, 2);
    }
}
