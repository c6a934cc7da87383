//! The `tdm` command: sampling, benchmarks, sanity statistics and the
//! worst-case reductions, each emitting JSON lines.

pub mod bench;
pub mod cli;
pub mod error;
pub mod reduce;
pub mod sample;
pub mod stats;

use std::io::Write;

use serde::Serialize;
use tdm_trapdoor::Registry;

pub use cli::{Cli, Command};
pub use error::{CliError, Result};

/// The JSON schema every report line validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let io = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    serde_json::to_writer(&mut *out, value).map_err(|e| io(e.into()))?;
    out.write_all(b"\n").map_err(io)
}

/// Executes `cli`; the returned value is the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let reg = Registry::builtin();
    let mut human = |line: String| {
        if !cli.json {
            let _ = writeln!(err, "{line}");
        }
    };
    match &cli.command {
        Command::Sample(a) => {
            let opts = sample::SampleOptions {
                family: a.family.clone(),
                n: a.n,
                p: a.p,
                seed: cli.seed,
                steps: a.steps,
                out: a.out.clone(),
            };
            let (report, _) = sample::sample(&reg, &opts)?;
            emit(out, &report)?;
            let stats: Vec<String> = report
                .summary
                .stats
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            human(format!(
                "{} n={} {}: {} ({} bytes, sha256 {})",
                report.summary.family,
                report.summary.dim,
                report
                    .summary
                    .modulus
                    .map_or("real".into(), |p| format!("F_{p}")),
                stats.join(" "),
                report.bytes,
                &report.sha256[..16],
            ));
            Ok(0)
        }
        Command::Bench(a) => {
            let opts = bench::BenchOptions {
                family: a.family.clone(),
                sizes: a.sizes.clone(),
                reps: a.reps,
                seed: cli.seed,
                p: a.p,
                steps: a.steps,
                dense_cap: a.dense_cap,
            };
            let report = bench::bench(&reg, &opts)?;
            emit(out, &report)?;
            human(format!(
                "{:>8} {:>14} {:>12} {:>14} {:>12}",
                "n", "ops", "wall_us", "dense_ops", "dense_us"
            ));
            for p in &report.points {
                human(format!(
                    "{:>8} {:>14} {:>12.1} {:>14} {:>12}",
                    p.n,
                    p.ops,
                    p.wall_ns as f64 / 1e3,
                    p.dense_ops,
                    p.dense_wall_ns
                        .map_or("-".into(), |t| format!("{:.1}", t as f64 / 1e3)),
                ));
            }
            human(format!(
                "slopes: ops {:.3}, wall {:.3}, dense ops {:.3}",
                report.ops_fit.slope, report.wall_fit.slope, report.dense_ops_fit.slope
            ));
            Ok(0)
        }
        Command::Stats(a) => {
            let opts = stats::StatsOptions {
                family: a.family.clone(),
                n: a.n,
                trials: a.trials,
                seed: cli.seed,
                p: a.p,
                alpha: a.alpha,
                steps: a.steps,
            };
            let reports = stats::stats(&reg, &opts)?;
            for r in &reports {
                emit(out, r)?;
                human(format!(
                    "{} {} statistic={:.4e} threshold={:.4e} samples={}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.test,
                    r.statistic,
                    r.threshold,
                    r.samples
                ));
            }
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::Reduce(a) => {
            let opts = reduce::ReduceOptions {
                kind: a.kind,
                model: a.model,
                family: a.family.clone(),
                n: a.n,
                p: a.p,
                eps: a.eps,
                seed: cli.seed,
                input: a.input,
                repetitions: a.reps,
            };
            let (report, trace) = reduce::reduce(&reg, &opts)?;
            if let Some(path) = &a.trace {
                let io = |source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                };
                let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
                for r in &trace {
                    emit(&mut w, r)?;
                }
                w.flush().map_err(io)?;
            }
            emit(out, &report)?;
            let d = report.diagnostics.as_ref();
            human(match &report.error {
                Some(e) => e.clone(),
                None => format!(
                    "{} {}: {} after {} rounds, {} oracle calls, {:.1} ms",
                    format!("{:?}", report.kind).to_lowercase(),
                    report.model,
                    if report.success {
                        "verified"
                    } else {
                        "WRONG ANSWER"
                    },
                    d.map_or(0, |d| d.rounds),
                    d.map_or(0, |d| d.oracle_calls),
                    report.wall_ns as f64 / 1e6
                ),
            });
            Ok(if report.success { 0 } else { 1 })
        }
    }
}
