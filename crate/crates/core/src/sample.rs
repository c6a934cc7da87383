use rand::Rng;

use crate::dense::DenseMatrix;
use crate::field::Field;
use crate::reference::is_invertible;

/// Each entry i.i.d. uniform on `[0, p)`.
pub fn sample_uniform<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    field: Field,
) -> DenseMatrix {
    DenseMatrix::random(field, rows, cols, rng)
}

/// Uniform over GL_n(F_p) by rejection; expected `1 / (1 - q_p)` draws.
pub fn sample_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> DenseMatrix {
    loop {
        let m = DenseMatrix::random(field, n, n, rng);
        if is_invertible(&m) {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::rank;
    use crate::rng::rng_from_seed;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn reproducible_under_seed() {
        let f = Field::new(5).unwrap();
        let a = sample_uniform(&mut rng_from_seed(42), 10, 10, f);
        let b = sample_uniform(&mut rng_from_seed(42), 10, 10, f);
        let c = sample_uniform(&mut rng_from_seed(43), 10, 10, f);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn binary_cell_means() {
        let f = Field::new(2).unwrap();
        let mut sums = vec![0u32; 128 * 128];
        for seed in 0..100 {
            let m = sample_uniform(&mut rng_from_seed(seed), 128, 128, f);
            for (s, &x) in sums.iter_mut().zip(m.as_slice()) {
                *s += x;
            }
        }
        let overall = sums.iter().map(|&s| s as f64).sum::<f64>() / (100.0 * 128.0 * 128.0);
        assert!((overall - 0.5).abs() < 0.05);
        // each cell mean over 100 seeds has sd 0.05; all within 6 sd
        assert!(sums.iter().all(|&s| (s as f64 / 100.0 - 0.5).abs() < 0.3));
    }

    #[test]
    fn chi_square_uniform_f5() {
        let f = Field::new(5).unwrap();
        let m = sample_uniform(&mut rng_from_seed(7), 1, 100_000, f);
        let mut counts = [0f64; 5];
        for &x in m.as_slice() {
            counts[x as usize] += 1.0;
        }
        let e = 100_000.0 / 5.0;
        let chi2: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
        let pval = 1.0 - ChiSquared::new(4.0).unwrap().cdf(chi2);
        assert!(pval > 1e-3, "chi2={chi2} p={pval}");
    }

    #[test]
    fn invertible_sampler() {
        let f = Field::new(2).unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..10 {
            assert_eq!(rank(&sample_invertible(&mut rng, 12, f)), 12);
        }
    }
}
