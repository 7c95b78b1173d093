#![allow(dead_code)]

use blockrange::gen::gaussian_matrix;
use blockrange::matcore::{ComplexMatrix, HermitianMatrix};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, rng);
    HermitianMatrix::new(&g.adjoint() * &g).unwrap()
}

pub fn random_square(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    gaussian_matrix(n, n, rng)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
