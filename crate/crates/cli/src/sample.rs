//! `tdm sample`: draw one trapdoor and serialize it.

use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};
use tdm_core::{rng_from_seed, Field};
use tdm_trapdoor::{Registry, SampleRequest, Sampled, Summary};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SampleOptions {
    pub family: String,
    pub n: usize,
    pub p: u32,
    pub seed: u64,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub command: &'static str,
    pub seed: u64,
    pub summary: Summary,
    /// Length of the `TDM1` encoding.
    pub bytes: usize,
    /// SHA-256 of the `TDM1` encoding, hex.
    pub sha256: String,
    pub out: Option<String>,
}

/// Samples, and writes the encoding to `opts.out` when set.
pub fn sample(reg: &Registry, opts: &SampleOptions) -> Result<(SampleReport, Sampled)> {
    let field = Field::new(opts.p as u64)?;
    let mut req = SampleRequest::new(opts.n, field);
    req.steps = opts.steps;
    let sampled = reg.sample(&opts.family, &req, &mut rng_from_seed(opts.seed))?;
    let bytes = sampled.encode();
    if let Some(path) = &opts.out {
        std::fs::write(path, &bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let report = SampleReport {
        command: "sample",
        seed: opts.seed,
        summary: sampled.summary(),
        bytes: bytes.len(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        out: opts.out.as_ref().map(|p| p.display().to_string()),
    };
    Ok((report, sampled))
}
