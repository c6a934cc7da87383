use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qp::QpTable;

/// Multipliers for the repetition counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c1: 4.0,
            c2: 8.0,
            c3: 4.0,
            c4: 4.0,
            c5: 8.0,
            c6: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionConfig {
    /// Advantage parameter of the oracle hypothesis.
    pub eps: f64,
    pub constants: Constants,
    /// Probes per Freivalds check; `None` means `ceil(40 / log2 p)`.
    pub freivalds_rounds: Option<usize>,
    /// Replaces the computed repetition count when set.
    pub repetitions: Option<usize>,
    /// Seed for the reduction's own randomness (masks, probes).
    pub seed: u64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            constants: Constants::default(),
            freivalds_rounds: None,
            repetitions: None,
            seed: 0,
        }
    }
}

/// `max(ln x, 1)`
fn log_term(x: f64) -> f64 {
    x.ln().max(1.0)
}

fn ceil(x: f64) -> usize {
    x.ceil().max(1.0) as usize
}

impl ReductionConfig {
    pub fn with_eps(eps: f64, seed: u64) -> Self {
        Self {
            eps,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.constants;
        let all = [self.eps, c.c1, c.c2, c.c3, c.c4, c.c5, c.c6];
        if all.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParam(
                "eps and repetition constants must be positive".into(),
            ));
        }
        if self.freivalds_rounds == Some(0) || self.repetitions == Some(0) {
            return Err(Error::InvalidParam("round counts must be positive".into()));
        }
        Ok(())
    }

    pub fn freivalds(&self, p: u32) -> usize {
        self.freivalds_rounds
            .unwrap_or_else(|| tdm_core::freivalds::default_rounds(p))
    }

    fn or_override(&self, computed: usize) -> usize {
        self.repetitions.unwrap_or(computed)
    }

    /// `ceil(c1 log n / eps)`
    pub fn matmul_exact_rounds(&self, n: usize) -> usize {
        self.or_override(ceil(self.constants.c1 * log_term(n as f64) / self.eps))
    }

    /// `ceil(c2 log(pn) / (eps² p))`
    pub fn errorcorrect_reps(&self, n: usize, p: u32) -> usize {
        let p = p as f64;
        self.or_override(ceil(
            self.constants.c2 * log_term(p * n as f64) / (self.eps * self.eps * p),
        ))
    }

    /// `ceil(c3 log n / ((1 - q_p) eps))`
    pub fn invert_rounds(&self, n: usize, p: u32) -> usize {
        let q = QpTable::default().get(p);
        self.or_override(ceil(
            self.constants.c3 * log_term(n as f64) / ((1.0 - q) * self.eps),
        ))
    }

    /// `ceil(c4 log n / ((1 - q_p)² eps))`
    pub fn solve_rounds(&self, n: usize, p: u32) -> usize {
        let q = QpTable::default().get(p);
        self.or_override(ceil(
            self.constants.c4 * log_term(n as f64) / ((1.0 - q) * (1.0 - q) * self.eps),
        ))
    }

    /// `ceil(c5 log(pn) / eps²)`
    pub fn det_largep_iters(&self, n: usize, p: u32) -> usize {
        self.or_override(ceil(
            self.constants.c5 * log_term(p as f64 * n as f64) / (self.eps * self.eps),
        ))
    }

    /// `ceil(c6 log n / eps²)`
    pub fn det_f2_iters(&self, n: usize) -> usize {
        self.or_override(ceil(
            self.constants.c6 * log_term(n as f64) / (self.eps * self.eps),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_by_hand() {
        let c = ReductionConfig::with_eps(0.3, 0);
        // 4 ln 64 / 0.3 = 55.45
        assert_eq!(c.matmul_exact_rounds(64), 56);
        let c = ReductionConfig::with_eps(0.1, 0);
        // 8 ln 160 / 0.05 = 812.03
        assert_eq!(c.errorcorrect_reps(32, 5), 813);
        let c = ReductionConfig::with_eps(0.04, 0);
        // 8 ln 32 / 0.0016 = 17328.7
        assert_eq!(c.det_f2_iters(32), 17329);
        assert_eq!(ReductionConfig::with_eps(0.5, 0).matmul_exact_rounds(2), 8);
        let c = ReductionConfig {
            repetitions: Some(3),
            ..ReductionConfig::default()
        };
        assert_eq!(c.det_largep_iters(24, 3), 3);
    }

    #[test]
    fn validation() {
        assert!(ReductionConfig::with_eps(0.0, 0).validate().is_err());
        assert!(ReductionConfig::with_eps(f64::NAN, 0).validate().is_err());
        assert!(ReductionConfig::default().validate().is_ok());
        let c = ReductionConfig {
            freivalds_rounds: Some(0),
            ..ReductionConfig::default()
        };
        assert!(c.validate().is_err());
        assert_eq!(ReductionConfig::default().freivalds(2), 40);
        assert_eq!(ReductionConfig::default().freivalds(5), 18);
    }
}
