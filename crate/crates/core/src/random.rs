//! Seeded random generation shared by experiments, the built-in suite and tests.
//!
//! Complex Gaussian entries draw real and imaginary parts independently with
//! standard deviation `sigma / sqrt(2)`, so each entry has standard deviation `sigma`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{normalized, ComplexMatrix, C64};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian(rng: &mut Rng, sigma: f64) -> C64 {
    let s = sigma / std::f64::consts::SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize, sigma: f64) -> ComplexMatrix {
    // Row-major fill order keeps the stream layout stable.
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, sigma))
}

pub fn gaussian_vector(rng: &mut Rng, n: usize, sigma: f64) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng, sigma)).collect()
}

pub fn unit_vector(rng: &mut Rng, n: usize) -> Vec<C64> {
    normalized(&gaussian_vector(rng, n, 1.0))
}

/// Uniform real in `[lo, hi)`.
pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    use rand::Rng as _;
    rng.random_range(lo..hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = gaussian_matrix(&mut seeded(7), 3, 2, 1.0);
        let b = gaussian_matrix(&mut seeded(7), 3, 2, 1.0);
        assert_eq!(a, b);
        let c = gaussian_matrix(&mut seeded(8), 3, 2, 1.0);
        assert_ne!(a, c);
    }

    #[test]
    fn entry_scale() {
        let mut rng = seeded(1);
        let n = 20_000;
        let mean_sq: f64 = (0..n).map(|_| complex_gaussian(&mut rng, 0.5).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_sq - 0.25).abs() < 0.01, "{mean_sq}");
    }
}
