//! Necessary-condition sanity tests for sampled matrices.
//!
//! Passing these says nothing about pseudorandomness; failing one points at a
//! sampler bug.

use serde::Serialize;
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF, Normal};
use tdm_core::{reference, rng_from_seed, DenseMatrix, Field};
use tdm_trapdoor::{Family, RealMatrix, Registry, SampleRequest, Sampled};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StatsOptions {
    pub family: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub p: u32,
    /// Significance level of the distributional tests.
    pub alpha: f64,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub command: &'static str,
    pub test: &'static str,
    pub family: String,
    pub n: usize,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub samples: usize,
    pub seed: u64,
}

/// Tolerance of the exact orthogonality checks.
pub const ORTHO_TOL: f64 = 1e-9;

pub fn stats(reg: &Registry, opts: &StatsOptions) -> Result<Vec<StatReport>> {
    if opts.trials < 100 {
        return Err(CliError::Usage("stats needs at least 100 trials".into()));
    }
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(CliError::Usage("alpha must lie in (0, 1)".into()));
    }
    let field = Field::new(opts.p as u64)?;
    let family = reg.get(&opts.family)?;
    let samples = draw(family, opts, field)?;
    let report = |test, statistic: f64, threshold: f64, pass: bool, samples: usize| StatReport {
        command: "stats",
        test,
        family: opts.family.clone(),
        n: opts.n,
        statistic,
        threshold,
        pass,
        samples,
        seed: opts.seed,
    };
    let mut out = Vec::new();
    match samples {
        Drawn::Field(ms) => {
            let (stat, thr, count) = entry_chi_square(&ms, field, opts.alpha)?;
            out.push(report("entry_chi_square", stat, thr, stat <= thr, count));
            let (stat, thr) = full_rank_frequency(&ms, field);
            out.push(report(
                "full_rank_frequency",
                stat,
                thr,
                stat <= thr,
                ms.len(),
            ));
        }
        Drawn::Real(ms) => {
            let n = opts.n;
            if opts.family == "kac" {
                let (norm, ortho) = orthogonality(&ms);
                out.push(report(
                    "column_norm",
                    norm,
                    ORTHO_TOL,
                    norm <= ORTHO_TOL,
                    ms.len() * n,
                ));
                out.push(report(
                    "column_orthogonality",
                    ortho,
                    ORTHO_TOL,
                    ortho <= ORTHO_TOL,
                    ms.len() * n * (n - 1) / 2,
                ));
                // Squared entries of a Haar column are Beta(1/2, (n-1)/2).
                let xs: Vec<f64> = ms.iter().flat_map(|m| m.column(0)).map(|x| x * x).collect();
                let law = Beta::new(0.5, (n as f64 - 1.0) / 2.0)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let (d, thr) = ks(xs, |x| law.cdf(x), opts.alpha);
                out.push(report("entry_ks", d, thr, d <= thr, ms.len() * n));
            } else {
                let skip_diag = opts.family == "haarsym";
                let xs: Vec<f64> = ms
                    .iter()
                    .flat_map(|m| {
                        let c = m.column(0);
                        c.into_iter()
                            .enumerate()
                            .filter(move |&(i, _)| !(skip_diag && i == 0))
                            .map(|(_, x)| x)
                    })
                    .collect();
                let count = xs.len();
                let law = Normal::standard();
                let (d, thr) = ks(xs, |x| law.cdf(x), opts.alpha);
                out.push(report("entry_ks", d, thr, d <= thr, count));
            }
        }
    }
    Ok(out)
}

enum Drawn {
    Field(Vec<DenseMatrix>),
    Real(Vec<RealMatrix>),
}

fn draw(family: &dyn Family, opts: &StatsOptions, field: Field) -> Result<Drawn> {
    let mut rng = rng_from_seed(opts.seed);
    let mut req = SampleRequest::new(opts.n, field);
    req.steps = opts.steps;
    let mut fields = Vec::new();
    let mut reals = Vec::new();
    for _ in 0..opts.trials {
        match family.sample(&req, &mut rng)? {
            Sampled::Field(t) => fields.push(t.materialize()?),
            Sampled::Real(t) => reals.push(t.materialize()?),
        }
    }
    Ok(if reals.is_empty() {
        Drawn::Field(fields)
    } else {
        Drawn::Real(reals)
    })
}

/// Number of values in `[0, p)` landing in each of `k` equal-width bins.
fn bin_sizes(p: u64, k: u64) -> Vec<u64> {
    let start = |b: u64| (b * p).div_ceil(k);
    (0..k).map(|b| start(b + 1) - start(b)).collect()
}

/// Pooled entry counts against the uniform law, binned to at most 64 cells.
fn entry_chi_square(ms: &[DenseMatrix], field: Field, alpha: f64) -> Result<(f64, f64, usize)> {
    let p = field.modulus() as u64;
    let k = p.min(64);
    let mut counts = vec![0u64; k as usize];
    let mut total = 0usize;
    for m in ms {
        for &x in m.as_slice() {
            counts[(x as u64 * k / p) as usize] += 1;
        }
        total += m.as_slice().len();
    }
    let stat = bin_sizes(p, k)
        .iter()
        .zip(&counts)
        .map(|(&size, &o)| {
            let e = total as f64 * size as f64 / p as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let law = ChiSquared::new((k - 1) as f64).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((stat, law.inverse_cdf(1.0 - alpha), total))
}

/// `|observed - expected|` full-rank frequency and the band `max(0.05, 4σ)`.
fn full_rank_frequency(ms: &[DenseMatrix], field: Field) -> (f64, f64) {
    let n = ms[0].rows();
    let full = ms.iter().filter(|m| reference::rank(m) == n).count();
    let observed = full as f64 / ms.len() as f64;
    let expected = reference::invertible_probability(field.modulus(), n);
    let sigma = (expected * (1.0 - expected) / ms.len() as f64).sqrt();
    ((observed - expected).abs(), (4.0 * sigma).max(0.05))
}

/// Largest `|‖c_j‖ - 1|` and largest `|⟨c_i, c_j⟩|`, `i != j`.
fn orthogonality(ms: &[RealMatrix]) -> (f64, f64) {
    let (mut norm, mut ortho) = (0.0f64, 0.0f64);
    for m in ms {
        let g = m.transpose().matmul(m).expect("square");
        for i in 0..g.rows() {
            norm = norm.max((g.get(i, i).sqrt() - 1.0).abs());
            for j in 0..i {
                ortho = ortho.max(g.get(i, j).abs());
            }
        }
    }
    (norm, ortho)
}

/// One-sample Kolmogorov-Smirnov distance and its asymptotic critical value.
pub fn ks(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64, alpha: f64) -> (f64, f64) {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let crit = (-(alpha / 2.0).ln() / 2.0).sqrt() / n.sqrt();
    (d, crit)
}
