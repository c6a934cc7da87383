use thiserror::Error;

use crate::oracle::OracleKind;
use crate::report::Report;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] tdm_core::Error),
    #[error(transparent)]
    Trapdoor(#[from] tdm_trapdoor::Error),
    #[error("ReductionFailed: no verified candidate after {} rounds ({} oracle calls)", .0.rounds, .0.oracle_calls)]
    ReductionFailed(Box<Report>),
    #[error("oracle answers {got} queries, reduction needs {expected}")]
    OracleKind {
        expected: OracleKind,
        got: OracleKind,
    },
    #[error("oracle returned a {got} answer to a {kind} query")]
    AnswerShape { kind: OracleKind, got: &'static str },
    #[error("family {0:?} is not over a finite field")]
    NotAField(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}
