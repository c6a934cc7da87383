use serde::{Deserialize, Serialize};
use std::ops::AddAssign;

/// Scalar operation tally. A fused multiply-add counts once in each column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCount {
    pub muls: u64,
    pub adds: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.muls + self.adds
    }

    pub fn muladds(&mut self, n: usize) {
        self.muls += n as u64;
        self.adds += n as u64;
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        self.muls += rhs.muls;
        self.adds += rhs.adds;
    }
}
