//! Simulated average-case algorithms.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use tdm_core::{reference, DenseMatrix, FVector, Field, TdmRng};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Matmul,
    Invert,
    Solve,
    Determinant,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Matmul => "matmul",
            OracleKind::Invert => "invert",
            OracleKind::Solve => "solve",
            OracleKind::Determinant => "determinant",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Query<'a> {
    Matmul(&'a DenseMatrix, &'a DenseMatrix),
    Invert(&'a DenseMatrix),
    Solve(&'a DenseMatrix, &'a FVector),
    Determinant(&'a DenseMatrix),
}

impl Query<'_> {
    pub fn kind(&self) -> OracleKind {
        match self {
            Query::Matmul(..) => OracleKind::Matmul,
            Query::Invert(_) => OracleKind::Invert,
            Query::Solve(..) => OracleKind::Solve,
            Query::Determinant(_) => OracleKind::Determinant,
        }
    }

    fn field(&self) -> Field {
        match self {
            Query::Matmul(a, _) | Query::Invert(a) | Query::Solve(a, _) | Query::Determinant(a) => {
                a.field()
            }
        }
    }

    /// The reference answer.
    pub fn truth(&self) -> Result<Answer> {
        Ok(match *self {
            Query::Matmul(a, b) => Answer::Matrix(reference::product(a, b)?),
            Query::Invert(a) => match reference::inverse(a) {
                Ok(x) => Answer::Matrix(x),
                Err(tdm_core::Error::Singular) => Answer::Singular,
                Err(e) => return Err(e.into()),
            },
            Query::Solve(a, b) => match reference::solve(a, b) {
                Ok(x) => Answer::Vector(x),
                Err(tdm_core::Error::Singular) => Answer::Singular,
                Err(e) => return Err(e.into()),
            },
            Query::Determinant(a) => Answer::Scalar(reference::determinant(a)?),
        })
    }

    /// A uniformly random answer of the right shape.
    pub fn uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Answer {
        let f = self.field();
        match *self {
            Query::Matmul(a, b) => Answer::Matrix(DenseMatrix::random(f, a.rows(), b.cols(), rng)),
            Query::Invert(a) => Answer::Matrix(DenseMatrix::random(f, a.rows(), a.rows(), rng)),
            Query::Solve(a, _) => Answer::Vector(FVector::random(f, a.cols(), rng)),
            Query::Determinant(_) => Answer::Scalar(f.random(rng)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Matrix(DenseMatrix),
    Vector(FVector),
    Scalar(u32),
    /// The algorithm declares its input singular.
    Singular,
}

impl Answer {
    pub fn label(&self) -> &'static str {
        match self {
            Answer::Matrix(_) => "matrix",
            Answer::Vector(_) => "vector",
            Answer::Scalar(_) => "scalar",
            Answer::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum FaultModel {
    Honest,
    /// Correct with probability `eps`, an independent uniform answer otherwise.
    ExactWithProb {
        eps: f64,
    },
    /// Each output entry independently replaced by a uniform element with probability `rate`.
    EntrywiseCorrupt {
        rate: f64,
    },
    AlwaysWrong,
    AlwaysSingularAnswer,
}

impl FaultModel {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| (0.0..=1.0).contains(&x);
        match *self {
            FaultModel::ExactWithProb { eps } if !ok(eps) => Err(Error::InvalidParam(format!(
                "exactprob needs 0 <= eps <= 1, got {eps}"
            ))),
            FaultModel::EntrywiseCorrupt { rate } if !ok(rate) => Err(Error::InvalidParam(
                format!("corrupt needs 0 <= rate <= 1, got {rate}"),
            )),
            _ => Ok(()),
        }
    }

    /// Expected fraction of wrong output entries over a field of order `p`.
    pub fn expected_error_fraction(&self, p: u32) -> f64 {
        let miss = 1.0 - 1.0 / p as f64;
        match *self {
            FaultModel::Honest => 0.0,
            FaultModel::ExactWithProb { eps } => (1.0 - eps) * miss,
            FaultModel::EntrywiseCorrupt { rate } => rate * miss,
            FaultModel::AlwaysWrong | FaultModel::AlwaysSingularAnswer => 1.0,
        }
    }

    /// Corruption rate whose expected distance is exactly `(1 - 1/p - eps) n²`.
    pub fn corrupt_at_bound(p: u32, eps: f64) -> Self {
        let p = p as f64;
        FaultModel::EntrywiseCorrupt {
            rate: (1.0 - 1.0 / p - eps) * p / (p - 1.0),
        }
    }
}

impl fmt::Display for FaultModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultModel::Honest => f.write_str("honest"),
            FaultModel::ExactWithProb { eps } => write!(f, "exactprob:{eps}"),
            FaultModel::EntrywiseCorrupt { rate } => write!(f, "corrupt:{rate}"),
            FaultModel::AlwaysWrong => f.write_str("alwayswrong"),
            FaultModel::AlwaysSingularAnswer => f.write_str("singular"),
        }
    }
}

impl FromStr for FaultModel {
    type Err = Error;

    /// `honest`, `exactprob:<eps>`, `corrupt:<rate>`, `alwayswrong`, `singular`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = |what: &str| -> Result<f64> {
            arg.ok_or_else(|| {
                Error::InvalidParam(format!("{what} needs a parameter, e.g. {what}:0.5"))
            })?
            .parse::<f64>()
            .map_err(|e| Error::InvalidParam(format!("{s}: {e}")))
        };
        let m = match (name, arg) {
            ("honest", None) => FaultModel::Honest,
            ("alwayswrong", None) => FaultModel::AlwaysWrong,
            ("singular", None) => FaultModel::AlwaysSingularAnswer,
            ("exactprob", _) => FaultModel::ExactWithProb {
                eps: num("exactprob")?,
            },
            ("corrupt", _) => FaultModel::EntrywiseCorrupt {
                rate: num("corrupt")?,
            },
            _ => return Err(Error::InvalidParam(format!("unknown oracle model {s:?}"))),
        };
        m.validate()?;
        Ok(m)
    }
}

/// An average-case algorithm `M` for one problem.
pub trait AvgCaseOracle {
    fn kind(&self) -> OracleKind;

    /// Probability of an exactly correct answer on a uniform input.
    fn declared_success(&self) -> f64;

    /// Running time `T(n)` as reported in diagnostics.
    fn cost_model(&self) -> &str;

    fn query(&mut self, q: &Query<'_>) -> Result<Answer>;
}

/// Fault-model simulator over the reference oracles.
///
/// Its coins come from its own stream, so a run is reproducible from the
/// oracle seed and the sequence of inputs.
#[derive(Debug, Clone)]
pub struct FaultOracle {
    kind: OracleKind,
    model: FaultModel,
    rng: TdmRng,
    calls: usize,
}

pub fn make_fault_oracle(model: FaultModel, kind: OracleKind, rng: TdmRng) -> Result<FaultOracle> {
    model.validate()?;
    Ok(FaultOracle {
        kind,
        model,
        rng,
        calls: 0,
    })
}

impl FaultOracle {
    pub fn model(&self) -> FaultModel {
        self.model
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    fn corrupt(&mut self, truth: Answer, rate: f64, f: Field) -> Answer {
        let rng = &mut self.rng;
        let mut hit = |x: u32| {
            if rng.random::<f64>() < rate {
                f.random(rng)
            } else {
                x
            }
        };
        match truth {
            Answer::Matrix(m) => {
                let (r, c) = (m.rows(), m.cols());
                let data = m.into_vec().into_iter().map(&mut hit).collect();
                Answer::Matrix(DenseMatrix::from_reduced(f, r, c, data))
            }
            Answer::Vector(v) => Answer::Vector(FVector::from_reduced(
                f,
                v.into_vec().into_iter().map(hit).collect(),
            )),
            Answer::Scalar(x) => Answer::Scalar(hit(x)),
            Answer::Singular => Answer::Singular,
        }
    }

    fn wrong(&mut self, q: &Query<'_>) -> Result<Answer> {
        let truth = q.truth()?;
        let mut a = q.uniform(&mut self.rng);
        if a == truth {
            let f = q.field();
            a = match a {
                Answer::Matrix(mut m) => {
                    let x = m.get(0, 0);
                    m.set(0, 0, f.add(x, 1))?;
                    Answer::Matrix(m)
                }
                Answer::Vector(mut v) => {
                    let x = v.get(0);
                    v.set(0, f.add(x, 1))?;
                    Answer::Vector(v)
                }
                Answer::Scalar(x) => Answer::Scalar(f.add(x, 1)),
                Answer::Singular => Answer::Singular,
            };
        }
        Ok(a)
    }
}

impl AvgCaseOracle for FaultOracle {
    fn kind(&self) -> OracleKind {
        self.kind
    }

    fn declared_success(&self) -> f64 {
        match self.model {
            FaultModel::Honest => 1.0,
            FaultModel::ExactWithProb { eps } => eps,
            FaultModel::EntrywiseCorrupt { rate } => {
                if rate == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FaultModel::AlwaysWrong | FaultModel::AlwaysSingularAnswer => 0.0,
        }
    }

    fn cost_model(&self) -> &str {
        "O(n^3) Gaussian elimination"
    }

    fn query(&mut self, q: &Query<'_>) -> Result<Answer> {
        if q.kind() != self.kind {
            return Err(Error::OracleKind {
                expected: q.kind(),
                got: self.kind,
            });
        }
        self.calls += 1;
        match self.model {
            FaultModel::Honest => q.truth(),
            FaultModel::ExactWithProb { eps } => {
                if self.rng.random::<f64>() < eps {
                    q.truth()
                } else {
                    Ok(q.uniform(&mut self.rng))
                }
            }
            FaultModel::EntrywiseCorrupt { rate } => {
                let t = q.truth()?;
                Ok(self.corrupt(t, rate, q.field()))
            }
            FaultModel::AlwaysWrong => self.wrong(q),
            FaultModel::AlwaysSingularAnswer => Ok(match *q {
                Query::Determinant(_) => Answer::Scalar(0),
                Query::Matmul(a, b) => {
                    Answer::Matrix(DenseMatrix::zeros(a.field(), a.rows(), b.cols()))
                }
                Query::Invert(_) | Query::Solve(..) => Answer::Singular,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tdm_core::rng_from_seed;

    #[test]
    fn parse_round_trip() {
        for s in [
            "honest",
            "exactprob:0.95",
            "corrupt:0.3",
            "alwayswrong",
            "singular",
        ] {
            let m: FaultModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("exactprob".parse::<FaultModel>().is_err());
        assert!("exactprob:1.5".parse::<FaultModel>().is_err());
        assert!("honest:1".parse::<FaultModel>().is_err());
        assert!("maybe".parse::<FaultModel>().is_err());
    }

    #[test]
    fn corrupt_bound_rate() {
        let FaultModel::EntrywiseCorrupt { rate } = FaultModel::corrupt_at_bound(5, 0.1) else {
            unreachable!()
        };
        assert!((rate - 0.875).abs() < 1e-12);
        assert!(
            (FaultModel::EntrywiseCorrupt { rate }.expected_error_fraction(5) - 0.7).abs() < 1e-12
        );
    }

    #[test]
    fn kind_mismatch() {
        let f = Field::new(5).unwrap();
        let a = DenseMatrix::identity(f, 3);
        let mut o =
            make_fault_oracle(FaultModel::Honest, OracleKind::Invert, rng_from_seed(0)).unwrap();
        assert!(matches!(
            o.query(&Query::Determinant(&a)),
            Err(Error::OracleKind { .. })
        ));
        assert_eq!(o.query(&Query::Invert(&a)).unwrap(), Answer::Matrix(a));
    }

    #[test]
    fn always_wrong_is_wrong() {
        let f = Field::new(2).unwrap();
        let a = DenseMatrix::identity(f, 1);
        let mut o = make_fault_oracle(
            FaultModel::AlwaysWrong,
            OracleKind::Determinant,
            rng_from_seed(1),
        )
        .unwrap();
        for _ in 0..50 {
            assert_eq!(o.query(&Query::Determinant(&a)).unwrap(), Answer::Scalar(0));
        }
    }
}
