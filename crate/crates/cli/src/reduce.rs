//! `tdm reduce`: one worst-case instance through a reduction and a simulated
//! oracle, checked against the reference solver.

use std::time::Instant;

use clap::ValueEnum;
use rand::Rng;
use serde::Serialize;
use tdm_core::{reference, rng_from_seed, sample_invertible, split, DenseMatrix, FVector, Field};
use tdm_reductions::{
    make_fault_oracle, wc_det_f2, wc_det_largep, wc_invert, wc_matmul_errorcorrect,
    wc_matmul_exact, wc_solve, Constants, Error as ReductionError, FaultModel, OracleKind,
    ReductionConfig, Report, TraceRecord,
};
use tdm_trapdoor::Registry;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReduceKind {
    /// Product via an oracle exactly right with probability eps.
    Matmul,
    /// Product via an entrywise noisy oracle.
    Errorcorrect,
    Invert,
    Solve,
    /// Determinant over F_p, p > 2.
    Det,
    /// Determinant over F_2.
    Det2,
}

impl ReduceKind {
    pub fn oracle_kind(self) -> OracleKind {
        match self {
            ReduceKind::Matmul | ReduceKind::Errorcorrect => OracleKind::Matmul,
            ReduceKind::Invert => OracleKind::Invert,
            ReduceKind::Solve => OracleKind::Solve,
            ReduceKind::Det | ReduceKind::Det2 => OracleKind::Determinant,
        }
    }
}

/// Worst-case input class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputClass {
    /// Highly structured: all-ones and upper-triangular matrices.
    Structured,
    /// Two equal rows.
    Singular,
    /// Uniform entries; uniform invertible for `invert` and `solve`.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReduceOptions {
    pub kind: ReduceKind,
    pub model: FaultModel,
    pub family: String,
    pub n: usize,
    pub p: u32,
    pub eps: f64,
    pub seed: u64,
    pub input: InputClass,
    pub repetitions: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReduceReport {
    pub command: &'static str,
    pub kind: ReduceKind,
    pub model: String,
    pub family: String,
    pub n: usize,
    pub p: u32,
    pub eps: f64,
    pub seed: u64,
    pub input: InputClass,
    pub repetitions: Option<usize>,
    /// The reduction returned an answer equal to the reference answer.
    pub success: bool,
    /// `None` when the reduction returned an error.
    pub matches_reference: Option<bool>,
    pub error: Option<String>,
    pub diagnostics: Option<Report>,
    pub constants: Constants,
    pub wall_ns: u64,
}

/// The worst-case instance: a matrix pair, a matrix, or a system.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub rhs: FVector,
}

/// Ones on and above the diagonal with `d` in the top-left corner: determinant `d`.
fn upper_ones(f: Field, n: usize, d: u32) -> DenseMatrix {
    DenseMatrix::from_fn(f, n, n, |i, j| match (i, j) {
        (0, 0) => d as u64,
        _ => (j >= i) as u64,
    })
}

pub fn instance(
    class: InputClass,
    kind: ReduceKind,
    f: Field,
    n: usize,
    rng: &mut impl Rng,
) -> Instance {
    let p = f.modulus() as u64;
    let rhs = FVector::new(f, (0..n as u64).map(|i| ((i * i + 1) % p) as u32).collect())
        .expect("reduced");
    let a = match class {
        InputClass::Random => {
            let a = match kind {
                ReduceKind::Invert | ReduceKind::Solve => sample_invertible(rng, n, f),
                _ => DenseMatrix::random(f, n, n, rng),
            };
            return Instance {
                a,
                b: DenseMatrix::random(f, n, n, rng),
                rhs: FVector::random(f, n, rng),
            };
        }
        InputClass::Structured if kind.oracle_kind() == OracleKind::Matmul => {
            DenseMatrix::from_fn(f, n, n, |_, _| 1)
        }
        InputClass::Structured => upper_ones(f, n, if p == 2 { 1 } else { 2 }),
        InputClass::Singular => DenseMatrix::from_fn(f, n, n, |i, j| {
            let i = i.max(1) as u64;
            (i * i + 3 * j as u64 * i + j as u64 + (j as u64 == i) as u64) % p
        }),
    };
    Instance {
        a,
        b: upper_ones(f, n, 1),
        rhs,
    }
}

enum Value {
    Matrix(DenseMatrix),
    Vector(FVector),
    Scalar(u32),
}

/// Runs the reduction and compares its answer with the reference solver.
pub fn reduce(reg: &Registry, opts: &ReduceOptions) -> Result<(ReduceReport, Vec<TraceRecord>)> {
    opts.model.validate()?;
    let f = Field::new(opts.p as u64)?;
    let family = reg.get(&opts.family)?;
    let mut master = rng_from_seed(opts.seed);
    let inst = instance(opts.input, opts.kind, f, opts.n, &mut split(&mut master));
    let oracle_rng = split(&mut master);
    let cfg = ReductionConfig {
        repetitions: opts.repetitions,
        ..ReductionConfig::with_eps(opts.eps, master.random())
    };
    cfg.validate()?;
    let mut oracle = make_fault_oracle(opts.model, opts.kind.oracle_kind(), oracle_rng)?;

    let start = Instant::now();
    let o = &mut oracle;
    let got = match opts.kind {
        ReduceKind::Matmul => wc_matmul_exact(o, family, &inst.a, &inst.b, &cfg)
            .map(|r| (Value::Matrix(r.value), r.report)),
        ReduceKind::Errorcorrect => wc_matmul_errorcorrect(o, family, &inst.a, &inst.b, &cfg)
            .map(|r| (Value::Matrix(r.value), r.report)),
        ReduceKind::Invert => {
            wc_invert(o, family, &inst.a, &cfg).map(|r| (Value::Matrix(r.value), r.report))
        }
        ReduceKind::Solve => wc_solve(o, family, &inst.a, &inst.rhs, &cfg)
            .map(|r| (Value::Vector(r.value), r.report)),
        ReduceKind::Det => {
            wc_det_largep(o, family, &inst.a, &cfg).map(|r| (Value::Scalar(r.value), r.report))
        }
        ReduceKind::Det2 => {
            wc_det_f2(o, family, &inst.a, &cfg).map(|r| (Value::Scalar(r.value), r.report))
        }
    };
    let wall_ns = start.elapsed().as_nanos() as u64;

    let (matches_reference, error, diagnostics) = match got {
        Ok((value, report)) => (Some(check(&inst, opts.kind, &value)?), None, Some(report)),
        Err(ReductionError::ReductionFailed(report)) => {
            let msg = ReductionError::ReductionFailed(report.clone()).to_string();
            (None, Some(msg), Some(*report))
        }
        Err(e) => return Err(e.into()),
    };
    let trace = diagnostics
        .as_ref()
        .map(|d| d.trace.clone())
        .unwrap_or_default();
    let report = ReduceReport {
        command: "reduce",
        kind: opts.kind,
        model: opts.model.to_string(),
        family: opts.family.clone(),
        n: opts.n,
        p: opts.p,
        eps: opts.eps,
        seed: opts.seed,
        input: opts.input,
        repetitions: opts.repetitions,
        success: matches_reference == Some(true),
        matches_reference,
        error,
        diagnostics,
        constants: cfg.constants,
        wall_ns,
    };
    Ok((report, trace))
}

fn check(inst: &Instance, kind: ReduceKind, value: &Value) -> Result<bool> {
    Ok(match (kind, value) {
        (ReduceKind::Matmul | ReduceKind::Errorcorrect, Value::Matrix(m)) => {
            *m == reference::product(&inst.a, &inst.b)?
        }
        (ReduceKind::Invert, Value::Matrix(m)) => {
            reference::inverse(&inst.a).is_ok_and(|inv| inv == *m)
        }
        (ReduceKind::Solve, Value::Vector(x)) => {
            reference::solve(&inst.a, &inst.rhs).is_ok_and(|y| y == *x)
        }
        (ReduceKind::Det | ReduceKind::Det2, Value::Scalar(d)) => {
            *d == reference::determinant(&inst.a)?
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structured_instances_have_known_determinants() {
        let f = Field::new(5).unwrap();
        let mut rng = rng_from_seed(0);
        let s = instance(InputClass::Structured, ReduceKind::Det, f, 9, &mut rng);
        assert_eq!(reference::determinant(&s.a).unwrap(), 2);
        let s = instance(InputClass::Singular, ReduceKind::Invert, f, 9, &mut rng);
        assert_eq!(reference::determinant(&s.a).unwrap(), 0);
        let s = instance(InputClass::Structured, ReduceKind::Matmul, f, 9, &mut rng);
        assert_eq!(reference::rank(&s.a), 1);
        assert_eq!(reference::determinant(&s.b).unwrap(), 1);
        let s = instance(
            InputClass::Structured,
            ReduceKind::Det2,
            Field::new(2).unwrap(),
            9,
            &mut rng,
        );
        assert_eq!(reference::determinant(&s.a).unwrap(), 1);
    }
}
