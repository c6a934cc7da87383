//! Matrix-vector scaling measurements.

use std::time::Instant;

use serde::Serialize;
use tdm_core::{rng_from_seed, split, DenseMatrix, FVector, Field, OpCount, TdmRng};
use tdm_trapdoor::{Domain, Family, Registry, SampleRequest, Sampled};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

/// Least squares of `log2 y` against `log2 x`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Fit {
    let lx: Vec<f64> = xs.iter().map(|x| x.log2()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(1.0).log2()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Fit {
        slope,
        intercept: my - slope * mx,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub family: String,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub p: u32,
    pub steps: Option<usize>,
    /// Largest `n` for which the dense control is stored and timed; above it
    /// the dense operation count is measured on rows generated on the fly.
    pub dense_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    pub ops: u64,
    pub wall_ns: u64,
    pub dense_ops: u64,
    pub dense_wall_ns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub command: &'static str,
    pub family: String,
    /// `"F_p"` or `"real"`.
    pub field: String,
    pub modulus: Option<u32>,
    pub seed: u64,
    pub reps: usize,
    pub steps: Option<usize>,
    pub points: Vec<BenchPoint>,
    pub ops_fit: Fit,
    pub wall_fit: Fit,
    pub dense_ops_fit: Fit,
    pub dense_wall_fit: Option<Fit>,
}

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

/// One warm-up call, then the median of `reps` timed calls.
fn time_median(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<u64> {
    f()?;
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t = Instant::now();
        f()?;
        times.push(t.elapsed().as_nanos() as u64);
    }
    Ok(median(times))
}

fn real_matvec(m: &[f64], n: usize, v: &[f64], ops: &mut OpCount) -> Vec<f64> {
    ops.muladds(n * n);
    m.chunks_exact(n)
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn dense_control(
    field: Option<Field>,
    n: usize,
    cap: usize,
    reps: usize,
    rng: &mut TdmRng,
) -> Result<(u64, Option<u64>)> {
    use rand::Rng;
    let mut ops = OpCount::default();
    match field {
        Some(f) if n <= cap => {
            let m = DenseMatrix::random(f, n, n, rng);
            let v = FVector::random(f, n, rng);
            m.matvec_counted(&v, &mut ops)?;
            let t = time_median(reps, || {
                std::hint::black_box(m.matvec(&v)?);
                Ok(())
            })?;
            Ok((ops.total(), Some(t)))
        }
        Some(f) => {
            let v = FVector::random(f, n, rng);
            for _ in 0..n {
                DenseMatrix::random(f, 1, n, rng).matvec_counted(&v, &mut ops)?;
            }
            Ok((ops.total(), None))
        }
        None if n <= cap => {
            let m: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() - 0.5).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            real_matvec(&m, n, &v, &mut ops);
            let t = time_median(reps, || {
                std::hint::black_box(real_matvec(&m, n, &v, &mut OpCount::default()));
                Ok(())
            })?;
            Ok((ops.total(), Some(t)))
        }
        None => {
            let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            for _ in 0..n {
                let row: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                std::hint::black_box(real_matvec(&row, n, &v, &mut ops));
            }
            Ok((ops.total(), None))
        }
    }
}

/// Trapdoor and dense-control measurements at one size.
pub fn measure_point(
    family: &dyn Family,
    n: usize,
    field: Field,
    steps: Option<usize>,
    reps: usize,
    dense_cap: usize,
    rng: &mut TdmRng,
) -> Result<BenchPoint> {
    let mut req = SampleRequest::new(n, field);
    req.steps = steps;
    let sampled = family.sample(&req, rng)?;
    let mut ops = OpCount::default();
    let wall_ns = match &sampled {
        Sampled::Field(t) => {
            let v = FVector::random(field, n, rng);
            t.apply_counted(&v, &mut ops)?;
            time_median(reps, || {
                std::hint::black_box(t.apply(&v)?);
                Ok(())
            })?
        }
        Sampled::Real(t) => {
            let v: Vec<f64> = (0..n).map(|i| (i as f64 + 1.0).sin()).collect();
            t.apply_counted(&v, &mut ops)?;
            time_median(reps, || {
                std::hint::black_box(t.apply(&v)?);
                Ok(())
            })?
        }
    };
    let dense_field = matches!(sampled, Sampled::Field(_)).then_some(field);
    let (dense_ops, dense_wall_ns) = dense_control(dense_field, n, dense_cap, reps, rng)?;
    Ok(BenchPoint {
        n,
        ops: ops.total(),
        wall_ns,
        dense_ops,
        dense_wall_ns,
    })
}

pub fn bench(reg: &Registry, opts: &BenchOptions) -> Result<BenchReport> {
    if opts.sizes.len() < 3 {
        return Err(CliError::Usage("bench needs at least 3 sizes".into()));
    }
    if opts.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("sizes must be strictly increasing".into()));
    }
    if opts.reps == 0 {
        return Err(CliError::Usage("reps must be positive".into()));
    }
    let field = Field::new(opts.p as u64)?;
    let family = reg.get(&opts.family)?;
    let real = family.domain() == Domain::Real;
    let mut rng = rng_from_seed(opts.seed);
    let points = opts
        .sizes
        .iter()
        .map(|&n| {
            measure_point(
                family,
                n,
                field,
                opts.steps,
                opts.reps,
                opts.dense_cap,
                &mut split(&mut rng),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let col = |f: fn(&BenchPoint) -> u64| points.iter().map(|p| f(p) as f64).collect::<Vec<_>>();
    let timed: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.dense_wall_ns.map(|t| (p.n as f64, t as f64)))
        .collect();
    let dense_wall_fit = (timed.len() >= 2).then(|| {
        let (x, y): (Vec<f64>, Vec<f64>) = timed.into_iter().unzip();
        loglog_fit(&x, &y)
    });
    Ok(BenchReport {
        command: "bench",
        family: opts.family.clone(),
        field: if real { "real".into() } else { "F_p".into() },
        modulus: (!real).then_some(opts.p),
        seed: opts.seed,
        reps: opts.reps,
        steps: opts.steps,
        ops_fit: loglog_fit(&xs, &col(|p| p.ops)),
        wall_fit: loglog_fit(&xs, &col(|p| p.wall_ns)),
        dense_ops_fit: loglog_fit(&xs, &col(|p| p.dense_ops)),
        dense_wall_fit,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_power_law() {
        let xs = [1024.0, 2048.0, 4096.0, 8192.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        let f = loglog_fit(&xs, &ys);
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![5, 1, 3]), 3);
        assert_eq!(median(vec![4, 1, 3, 2]), 3);
    }
}
