//! Worst-case to average-case reductions for linear algebra over `F_p`.
//!
//! Every reduction masks its worst-case input with fresh samples from a
//! trapdoored family, so each oracle query is (pseudo)uniform, and undoes the
//! mask with the family's fast multiplication. Oracles are simulated by
//! [`FaultOracle`] under a chosen [`FaultModel`].

pub mod config;
pub mod det;
pub mod error;
pub mod linear;
pub mod mask;
pub mod matmul;
pub mod oracle;
pub mod qp;
pub mod report;
mod run;

pub use config::{Constants, ReductionConfig};
pub use det::{wc_det_f2, wc_det_largep};
pub use error::{Error, Result};
pub use linear::{wc_invert, wc_solve};
pub use mask::{ProductMask, Scramble};
pub use matmul::{wc_matmul_errorcorrect, wc_matmul_exact};
pub use oracle::{
    make_fault_oracle, Answer, AvgCaseOracle, FaultModel, FaultOracle, OracleKind, Query,
};
pub use qp::{qp, QpTable};
pub use report::{MaskForm, Report, TraceRecord};
pub use run::Outcome;
