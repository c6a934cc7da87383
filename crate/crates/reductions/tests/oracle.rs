mod common;

use common::*;
use tdm_core::{reference, rng_from_seed, DenseMatrix, FVector};
use tdm_reductions::*;

fn query_matmul(o: &mut FaultOracle, a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    match o.query(&Query::Matmul(a, b)).unwrap() {
        Answer::Matrix(m) => m,
        other => panic!("{other:?}"),
    }
}

#[test]
fn honest_is_reference() {
    let field = f(7);
    let mut rng = rng_from_seed(0);
    let a = DenseMatrix::random(field, 9, 9, &mut rng);
    let b = FVector::random(field, 9, &mut rng);
    let mk = |k| make_fault_oracle(FaultModel::Honest, k, rng_from_seed(1)).unwrap();
    assert_eq!(
        query_matmul(&mut mk(OracleKind::Matmul), &a, &a),
        naive_matmul(&a, &a)
    );
    let det = reference::determinant(&a).unwrap();
    assert_eq!(
        mk(OracleKind::Determinant)
            .query(&Query::Determinant(&a))
            .unwrap(),
        Answer::Scalar(det)
    );
    let sing = repeated_row(field, 9);
    assert_eq!(
        mk(OracleKind::Invert).query(&Query::Invert(&sing)).unwrap(),
        Answer::Singular
    );
    match mk(OracleKind::Solve).query(&Query::Solve(&a, &b)).unwrap() {
        Answer::Vector(x) if det != 0 => assert_eq!(naive_matvec(&a, x.as_slice()), b.as_slice()),
        Answer::Singular if det == 0 => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn exact_with_prob_frequency() {
    let field = f(5);
    let mut rng = rng_from_seed(3);
    let a = DenseMatrix::random(field, 4, 4, &mut rng);
    let truth = naive_matmul(&a, &a);
    for eps in [0.0, 0.3, 0.95] {
        let model = FaultModel::ExactWithProb { eps };
        let mut o = make_fault_oracle(model, OracleKind::Matmul, rng_from_seed(9)).unwrap();
        let trials = 4000;
        let hits = (0..trials)
            .filter(|_| query_matmul(&mut o, &a, &a) == truth)
            .count();
        let sd = (eps * (1.0 - eps) / trials as f64).sqrt().max(1e-9);
        let rate = hits as f64 / trials as f64;
        assert!((rate - eps).abs() <= 4.0 * sd + 1e-3, "eps={eps}: {rate}");
        assert_eq!(o.calls(), trials);
    }
}

#[test]
fn entrywise_corrupt_half_distance() {
    let (n, queries) = (64usize, 200usize);
    let field = f(2);
    let mut rng = rng_from_seed(17);
    let mut o = make_fault_oracle(
        FaultModel::EntrywiseCorrupt { rate: 0.5 },
        OracleKind::Matmul,
        rng_from_seed(4),
    )
    .unwrap();
    let mut total = 0usize;
    for _ in 0..queries {
        let a = DenseMatrix::random(field, n, n, &mut rng);
        let b = DenseMatrix::random(field, n, n, &mut rng);
        let got = query_matmul(&mut o, &a, &b);
        total += got.hamming_distance(&naive_matmul(&a, &b)).unwrap();
    }
    let n2 = (n * n) as f64;
    let mean = total as f64 / queries as f64;
    // Each entry is wrong independently with probability 1/4.
    let sigma = (n2 * 0.25 * 0.75 / queries as f64).sqrt();
    assert!(
        (mean - 0.25 * n2).abs() <= 3.0 * sigma,
        "mean distance {mean}"
    );
    assert!(
        (FaultModel::EntrywiseCorrupt { rate: 0.5 }.expected_error_fraction(2) - 0.25).abs()
            < 1e-12
    );
}

#[test]
fn oracle_stream_is_reproducible() {
    let field = f(3);
    let a = DenseMatrix::identity(field, 6);
    let run = || {
        let mut o = make_fault_oracle(
            "exactprob:0.5".parse().unwrap(),
            OracleKind::Invert,
            rng_from_seed(2),
        )
        .unwrap();
        (0..20)
            .map(|_| o.query(&Query::Invert(&a)).unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn singular_fraction_tracks_qp() {
    let field = f(2);
    let mut rng = rng_from_seed(8);
    let trials = 2000;
    let singular = (0..trials)
        .filter(|_| !reference::is_invertible(&DenseMatrix::random(field, 64, 64, &mut rng)))
        .count();
    let frac = singular as f64 / trials as f64;
    let exact = 1.0 - reference::invertible_probability(2, 64);
    let sd = (exact * (1.0 - exact) / trials as f64).sqrt();
    assert!((frac - exact).abs() <= 4.0 * sd, "{frac} vs {exact}");
    assert!((exact - QpTable::default().get(2)).abs() < 1e-3);
}
