mod common;

use common::{f, full_rank_rate, naive_matmul, naive_matvec, naive_rank};
use proptest::prelude::*;
use tdm_core::{
    rng_from_seed, sample_invertible, DenseMatrix, FVector, Field, OpCount, Permutation,
};
use tdm_trapdoor::code::{
    McElieceColumn, McElieceParams, McElieceTrapdoor, QcGenerator, Scrambler, StackedTrapdoor,
};
use tdm_trapdoor::FieldTrapdoor;

/// `C[i][j] = c[(j - i) mod b]`
fn circulant_by_definition(field: Field, c: &[u32]) -> DenseMatrix {
    let b = c.len();
    DenseMatrix::from_fn(field, b, b, |i, j| c[(j + b - i) % b] as u64)
}

/// `P[σ(i)][i] = 1`
fn permutation_by_definition(field: Field, p: &Permutation) -> DenseMatrix {
    let s = p.as_slice();
    DenseMatrix::from_fn(field, s.len(), s.len(), |r, c| (s[c] as usize == r) as u64)
}

fn generator_by_definition(g: &QcGenerator, r: usize, c: usize) -> DenseMatrix {
    let (b, field) = (g.block_size(), g.field());
    let blocks: Vec<Vec<DenseMatrix>> = (0..r)
        .map(|i| {
            (0..c)
                .map(|j| circulant_by_definition(field, g.block(i, j).first_row()))
                .collect()
        })
        .collect();
    DenseMatrix::from_fn(field, r * b, c * b, |row, col| {
        blocks[row / b][col / b].get(row % b, col % b) as u64
    })
}

fn column_oracle(col: &McElieceColumn) -> DenseMatrix {
    let field = col.gen().field();
    let b = col.gen().block_size();
    let g = generator_by_definition(col.gen(), col.rows() / b, col.cols() / b);
    let s = match col.scrambler() {
        Scrambler::Dense(s) => s.clone(),
        Scrambler::Stacked(t) => stacked_oracle(t),
    };
    naive_matmul(
        &naive_matmul(&permutation_by_definition(field, col.perm()), &g),
        &s,
    )
}

fn stacked_oracle(t: &StackedTrapdoor) -> DenseMatrix {
    let parts: Vec<_> = t.columns().iter().map(column_oracle).collect();
    let k = t.k();
    DenseMatrix::from_fn(t.field(), t.dim(), t.dim(), |r, c| {
        parts[c / k].get(r, c % k) as u64
    })
}

#[test]
fn single_circulant_column() {
    let field = f(257);
    let t = McElieceTrapdoor::sample(
        32,
        McElieceParams {
            k: Some(32),
            b: Some(32),
            recurse: false,
        },
        field,
        &mut rng_from_seed(1),
    )
    .unwrap();
    assert_eq!(t.stacked().columns().len(), 1);
    assert_eq!(t.materialize().unwrap(), stacked_oracle(t.stacked()));
}

#[test]
fn degenerate_code_gives_scrambler() {
    let field = f(7);
    let n = 16;
    let mut e0 = vec![0u32; n];
    e0[0] = 1;
    let gen = QcGenerator::from_first_rows(field, n, 1, 1, vec![e0]).unwrap();
    let s = sample_invertible(&mut rng_from_seed(3), n, field);
    let col =
        McElieceColumn::new(Permutation::identity(n), gen, Scrambler::Dense(s.clone())).unwrap();
    let t = StackedTrapdoor::new(vec![col]).unwrap();
    assert_eq!(t.materialize().unwrap(), s);
}

#[test]
fn identity_permutation_and_scrambler_give_generator() {
    let field = f(5);
    let gen = QcGenerator::sample(field, 4, 4, 1, &mut rng_from_seed(2)).unwrap();
    let dense_g = generator_by_definition(&gen, 4, 1);
    let col = McElieceColumn::new(
        Permutation::identity(16),
        gen,
        Scrambler::Dense(DenseMatrix::identity(field, 4)),
    )
    .unwrap();
    assert_eq!(col.materialize().unwrap(), dense_g);
}

#[test]
fn stacking_is_horizontal_concatenation() {
    let field = f(3);
    let mut rng = rng_from_seed(4);
    let make = |rng: &mut _| {
        let gen = QcGenerator::sample(field, 4, 2, 1, rng).unwrap();
        McElieceColumn::new(
            Permutation::random(8, rng),
            gen,
            Scrambler::Dense(sample_invertible(rng, 4, field)),
        )
        .unwrap()
    };
    let (c1, c2) = (make(&mut rng), make(&mut rng));
    let (m1, m2) = (c1.materialize().unwrap(), c2.materialize().unwrap());
    let t = StackedTrapdoor::new(vec![c1, c2]).unwrap();
    assert_eq!(
        t.materialize().unwrap(),
        DenseMatrix::hstack(field, &[m1, m2]).unwrap()
    );
    assert!(StackedTrapdoor::new(vec![]).is_err());
}

#[test]
fn n64_k8_b8_matches_dense_on_100_vectors() {
    let field = f(257);
    let mut rng = rng_from_seed(5);
    let t = McElieceTrapdoor::sample(
        64,
        McElieceParams {
            k: Some(8),
            b: Some(8),
            recurse: false,
        },
        field,
        &mut rng,
    )
    .unwrap();
    let m = stacked_oracle(t.stacked());
    assert_eq!(t.materialize().unwrap(), m);
    assert!(t.stacked().columns()[0].gen().uses_ntt());
    for _ in 0..100 {
        let v = FVector::random(field, 64, &mut rng);
        assert_eq!(
            t.apply(&v).unwrap().into_vec(),
            naive_matvec(&m, v.as_slice())
        );
    }
    assert!(t.apply(&FVector::zeros(field, 64)).unwrap().is_zero());
}

#[test]
fn exact_for_many_shapes_and_fields() {
    for (i, n) in [8usize, 16, 32, 64, 100, 128, 256].into_iter().enumerate() {
        for p in [2u64, 3, 257, 998244353] {
            for recurse in [false, true] {
                let field = f(p);
                let mut rng = rng_from_seed(i as u64 * 31 + p);
                let t = McElieceTrapdoor::sample(
                    n,
                    McElieceParams {
                        recurse,
                        ..Default::default()
                    },
                    field,
                    &mut rng,
                )
                .unwrap();
                let m = stacked_oracle(t.stacked()).submatrix(0, 0, n, n).unwrap();
                assert_eq!(t.materialize().unwrap(), m);
                for _ in 0..5 {
                    let v = FVector::random(field, n, &mut rng);
                    assert_eq!(
                        t.apply(&v).unwrap().into_vec(),
                        naive_matvec(&m, v.as_slice())
                    );
                }
            }
        }
    }
}

#[test]
fn recursive_scrambler_below_threshold_is_exact() {
    let field = f(257);
    let mut rng = rng_from_seed(6);
    let t = StackedTrapdoor::sample(256, 64, 64, field, Some(16), &mut rng).unwrap();
    assert!(t.depth() >= 1);
    let m = stacked_oracle(&t);
    let v = FVector::random(field, 256, &mut rng);
    assert_eq!(
        t.apply_raw(v.as_slice(), &mut OpCount::default()),
        naive_matvec(&m, v.as_slice())
    );
}

#[test]
fn reproducible() {
    let field = f(5);
    let a = McElieceTrapdoor::sample(96, McElieceParams::default(), field, &mut rng_from_seed(9))
        .unwrap();
    let b = McElieceTrapdoor::sample(96, McElieceParams::default(), field, &mut rng_from_seed(9))
        .unwrap();
    assert_eq!(a, b);
}

#[test]
fn encoding_cost_with_ntt() {
    let field = f(998244353);
    let (b, r, c) = (64usize, 16usize, 4usize);
    let g = QcGenerator::sample(field, b, r, c, &mut rng_from_seed(1)).unwrap();
    assert!(g.uses_ntt());
    let mut ops = OpCount::default();
    g.encode_raw(&vec![1; c * b], &mut ops);
    let bound = (r * c * b) as f64 * (b as f64).log2();
    assert!(
        (ops.total() as f64) <= 4.0 * bound,
        "{} > 4 * {bound}",
        ops.total()
    );
}

#[test]
fn column_rank_at_most_k() {
    let field = f(2);
    let t = McElieceTrapdoor::sample(128, McElieceParams::default(), field, &mut rng_from_seed(3))
        .unwrap();
    for col in t.stacked().columns() {
        assert!(naive_rank(&column_oracle(col)) <= t.stacked().k());
    }
}

#[test]
fn full_rank_frequency_over_f2_n128() {
    let field = f(2);
    let trials = 1000;
    let mut rng = rng_from_seed(78);
    let full = (0..trials)
        .filter(|_| {
            let t =
                McElieceTrapdoor::sample(128, McElieceParams::default(), field, &mut rng).unwrap();
            naive_rank(&t.materialize().unwrap()) == 128
        })
        .count();
    let freq = full as f64 / trials as f64;
    let expect = full_rank_rate(2, 128);
    println!("mceliece full-rank frequency {freq:.3} vs uniform {expect:.3}");
    assert!((freq - expect).abs() <= 0.05, "{freq} vs {expect}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn permutation_preserves_hamming_weight(seed in any::<u64>(), n in 1usize..200) {
        let field = f(3);
        let mut rng = rng_from_seed(seed);
        let p = Permutation::random(n, &mut rng);
        let x = FVector::random(field, n, &mut rng);
        prop_assert_eq!(p.apply(&x).unwrap().hamming_weight(), x.hamming_weight());
    }

    #[test]
    fn apply_matches_materialized(seed in any::<u64>(), n in 1usize..160, p in prop::sample::select(vec![2u64, 5, 257])) {
        let field = f(p);
        let mut rng = rng_from_seed(seed);
        let t = McElieceTrapdoor::sample(n, McElieceParams::default(), field, &mut rng).unwrap();
        let m = t.materialize().unwrap();
        let v = FVector::random(field, n, &mut rng);
        prop_assert_eq!(t.apply(&v).unwrap().into_vec(), naive_matvec(&m, v.as_slice()));
    }
}
