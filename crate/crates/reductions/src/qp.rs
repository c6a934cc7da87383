//! Singularity constants `q_p = 1 - inf_n |GL_n(F_p)| / p^{n²}`.

use serde::Serialize;

/// Published three-decimal values for the smallest field orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QpTable {
    pub entries: Vec<(u32, f64)>,
}

impl Default for QpTable {
    fn default() -> Self {
        Self {
            entries: vec![(2, 0.711), (3, 0.440), (4, 0.311)],
        }
    }
}

impl QpTable {
    /// Tabulated value if present, otherwise the computed limit.
    pub fn get(&self, p: u32) -> f64 {
        self.entries
            .iter()
            .find(|(q, _)| *q == p)
            .map_or_else(|| qp(p), |&(_, v)| v)
    }

    /// `1/(p-1)`, which every `q_p` stays below.
    pub fn bound(p: u32) -> f64 {
        1.0 / (p as f64 - 1.0)
    }
}

/// `1 - Π_{i>=1} (1 - p^{-i})`, the `n -> ∞` limit of the singular fraction.
pub fn qp(p: u32) -> f64 {
    assert!(p >= 2, "q_p needs p >= 2");
    let p = p as f64;
    let mut prod = 1.0;
    let mut term = 1.0;
    for _ in 0..200 {
        term /= p;
        if term < 1e-18 {
            break;
        }
        prod *= 1.0 - term;
    }
    1.0 - prod
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_table() {
        let t = QpTable::default();
        for &(p, v) in &t.entries {
            assert!((qp(p) - v).abs() < 5e-4, "p={p}: {} vs {v}", qp(p));
        }
    }

    #[test]
    fn below_bound() {
        for p in [2, 3, 4, 5, 7, 11, 257, 65537] {
            assert!(qp(p) < QpTable::bound(p));
        }
    }
}
