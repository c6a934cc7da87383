//! Bookkeeping shared by every reduction.

use tdm_core::{rng_from_seed, DenseMatrix, FVector, Field, TdmRng};

use crate::config::ReductionConfig;
use crate::error::{Error, Result};
use crate::oracle::{Answer, AvgCaseOracle, OracleKind, Query};
use crate::report::{digest, MaskForm, Report, TraceRecord};

/// A reduction's result and how it got there.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub value: T,
    pub report: Report,
}

pub(crate) struct Run<'a> {
    oracle: &'a mut dyn AvgCaseOracle,
    pub rng: TdmRng,
    pub report: Report,
}

impl<'a> Run<'a> {
    pub fn start(
        oracle: &'a mut dyn AvgCaseOracle,
        expected: OracleKind,
        cfg: &ReductionConfig,
        name: &'static str,
        budget: usize,
    ) -> Result<Self> {
        cfg.validate()?;
        if oracle.kind() != expected {
            return Err(Error::OracleKind {
                expected,
                got: oracle.kind(),
            });
        }
        Ok(Self {
            oracle,
            rng: rng_from_seed(cfg.seed),
            report: Report::new(name, budget),
        })
    }

    pub fn ask(&mut self, round: usize, mask: MaskForm, q: Query<'_>) -> Result<Answer> {
        self.report.trace.push(TraceRecord {
            call: self.report.oracle_calls,
            round,
            kind: q.kind(),
            mask,
            digest: digest(&q),
            verified: None,
        });
        self.report.oracle_calls += 1;
        self.oracle.query(&q)
    }

    /// Marks the latest call.
    pub fn verified(&mut self, ok: bool) {
        if let Some(r) = self.report.trace.last_mut() {
            r.verified = Some(ok);
        }
    }

    pub fn finish<T>(self, value: T) -> Outcome<T> {
        Outcome {
            value,
            report: self.report,
        }
    }

    pub fn fail(self) -> Error {
        Error::ReductionFailed(Box::new(self.report))
    }
}

pub(crate) fn square(a: &DenseMatrix) -> Result<(usize, Field)> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::InvalidParam(format!(
            "need a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok((a.rows(), a.field()))
}

pub(crate) fn square_pair(a: &DenseMatrix, b: &DenseMatrix) -> Result<(usize, Field)> {
    let (n, f) = square(a)?;
    let (m, g) = square(b)?;
    f.ensure_same(&g)?;
    if n != m {
        return Err(Error::InvalidParam(format!("operands of size {n} and {m}")));
    }
    Ok((n, f))
}

pub(crate) fn matrix_answer(a: Answer, rows: usize, cols: usize) -> Option<DenseMatrix> {
    match a {
        Answer::Matrix(m) if m.rows() == rows && m.cols() == cols => Some(m),
        _ => None,
    }
}

pub(crate) fn vector_answer(a: Answer, n: usize) -> Option<FVector> {
    match a {
        Answer::Vector(v) if v.len() == n => Some(v),
        _ => None,
    }
}

pub(crate) fn scalar_answer(a: Answer) -> Option<u32> {
    match a {
        Answer::Scalar(x) => Some(x),
        _ => None,
    }
}
