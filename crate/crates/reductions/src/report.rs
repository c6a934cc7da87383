//! Per-run diagnostics and the oracle trace.

use std::io::{self, Write};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::oracle::{OracleKind, Query};

/// Shape of an oracle input in terms of the worst-case input `X` and fresh
/// trapdoor samples `R`, `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskForm {
    /// `R`
    Fresh,
    /// `X + R`
    Sum,
    /// `P⁻¹ D⁻¹ (X + R)` or `(X + R) P⁻¹`
    ScaledSum,
    /// `R X`
    Left,
    /// `X R`
    Right,
    /// `R X Q`
    Sandwich,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub call: usize,
    pub round: usize,
    pub kind: OracleKind,
    pub mask: MaskForm,
    /// SHA-256 of the oracle input, hex.
    pub digest: String,
    /// `None` where no per-round check exists.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub reduction: &'static str,
    /// Repetitions allowed by the configuration.
    pub budget: usize,
    pub rounds: usize,
    pub oracle_calls: usize,
    /// Plurality ties (error-corrected multiplication).
    pub ties: usize,
    /// Iterations skipped because `M(R) = 0` (determinant).
    pub skipped: usize,
    /// Final counter value or largest plurality count (determinant).
    pub counter: Option<usize>,
    pub threshold: Option<f64>,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
}

impl Report {
    pub fn new(reduction: &'static str, budget: usize) -> Self {
        Self {
            reduction,
            budget,
            rounds: 0,
            oracle_calls: 0,
            ties: 0,
            skipped: 0,
            counter: None,
            threshold: None,
            trace: Vec::new(),
        }
    }

    /// One JSON object per oracle call.
    pub fn write_trace<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.trace {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Digest over the modulus, shapes and entries of a query.
pub fn digest(q: &Query<'_>) -> String {
    fn feed(h: &mut Sha256, m: &tdm_core::DenseMatrix) {
        h.update(m.field().modulus().to_le_bytes());
        h.update((m.rows() as u64).to_le_bytes());
        h.update((m.cols() as u64).to_le_bytes());
        let bytes: Vec<u8> = m.as_slice().iter().flat_map(|x| x.to_le_bytes()).collect();
        h.update(&bytes);
    }
    let mut h = Sha256::new();
    match *q {
        Query::Matmul(a, b) => {
            feed(&mut h, a);
            feed(&mut h, b);
        }
        Query::Invert(a) | Query::Determinant(a) => feed(&mut h, a),
        Query::Solve(a, b) => {
            feed(&mut h, a);
            let bytes: Vec<u8> = b.as_slice().iter().flat_map(|x| x.to_le_bytes()).collect();
            h.update(&bytes);
        }
    }
    hex::encode(h.finalize())
}
