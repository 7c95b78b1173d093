//! Seeded generators for positive semidefinite block instances.
//!
//! Every generator draws from a [`ChaCha8Rng`] seeded with the 64-bit seed,
//! so the same parameters always give bitwise-identical instances.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcore::{real_part, BlockPsd, ComplexMatrix, HermitianMatrix, MatError, PSD_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("block order must be at least 1")]
    ZeroOrder,
    #[error("rank {rank} is out of range 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("alpha must be a finite number > 1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("family {0} requires block order 2")]
    FixedOrder(&'static str),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomFullRank,
    RandomLowRank,
    HermitianOffdiag,
    #[serde(rename = "normal-2x2-offdiag")]
    Normal2x2Offdiag,
    SegmentOffdiag,
    AlphaExample,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::RandomFullRank,
        Family::RandomLowRank,
        Family::HermitianOffdiag,
        Family::Normal2x2Offdiag,
        Family::SegmentOffdiag,
        Family::AlphaExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomFullRank => "random-full-rank",
            Family::RandomLowRank => "random-low-rank",
            Family::HermitianOffdiag => "hermitian-offdiag",
            Family::Normal2x2Offdiag => "normal-2x2-offdiag",
            Family::SegmentOffdiag => "segment-offdiag",
            Family::AlphaExample => "alpha-example",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Full description of one generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            rank: None,
            alpha: None,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn generate(&self) -> Result<BlockPsd, GenError> {
        match self.family {
            Family::RandomFullRank => random_block_psd(self.n, self.seed, self.rank),
            Family::RandomLowRank => {
                let rank = self.rank.unwrap_or(1 + (self.seed as usize) % (2 * self.n.max(1) - 1));
                random_block_psd(self.n, self.seed, Some(rank))
            }
            Family::HermitianOffdiag => hermitian_x_block(self.n, self.seed),
            Family::Normal2x2Offdiag => {
                if self.n != 2 {
                    return Err(GenError::FixedOrder("normal-2x2-offdiag"));
                }
                normal_2x2_offdiag_block(self.seed)
            }
            Family::SegmentOffdiag => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5e6d_e471);
                let a = complex_gaussian(&mut rng);
                let b = complex_gaussian(&mut rng);
                segment_offdiag_block(self.n, self.seed, a, b)
            }
            Family::AlphaExample => {
                if self.n != 2 {
                    return Err(GenError::FixedOrder("alpha-example"));
                }
                alpha_example(self.alpha.unwrap_or(4.0))
            }
        }
    }
}

/// Standard complex Gaussian: independent real and imaginary parts of variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("positive dimensions")
}

/// `(G + G*) / 2` for a Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    real_part(&gaussian_matrix(n, n, rng)).expect("square")
}

/// Haar-like unitary: Gram-Schmidt orthonormalization of Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        // two passes of classical Gram-Schmidt keep orthogonality at machine precision
        for _ in 0..2 {
            for u in &cols {
                let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= dot * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    let data = (0..n).flat_map(|i| cols.iter().map(move |c| c[i])).collect();
    ComplexMatrix::new(n, n, data).expect("square")
}

/// Columns of `random_unitary` as an orthonormal basis.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let u = random_unitary(n, rng);
    (0..n).map(|j| (0..n).map(|i| u[(i, j)]).collect()).collect()
}

/// `M = G* G` with `G` a `rank x 2n` Gaussian matrix, split into blocks.
pub fn random_block_psd(n: usize, seed: u64, rank: Option<usize>) -> Result<BlockPsd, GenError> {
    if n == 0 {
        return Err(GenError::ZeroOrder);
    }
    let rank = rank.unwrap_or(2 * n);
    if rank == 0 || rank > 2 * n {
        return Err(GenError::RankOutOfRange { rank, max: 2 * n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(rank, 2 * n, &mut rng);
    let m = HermitianMatrix::new(&g.adjoint() * &g)?;
    Ok(BlockPsd::from_assembled(&m, PSD_TOL)?)
}

/// Average of `P` and `Sigma P Sigma` with `Sigma = [0 I; I 0]`: equal
/// diagonal blocks `(A+B)/2` and Hermitian off-diagonal block `Re X`.
pub fn hermitian_x_block(n: usize, seed: u64) -> Result<BlockPsd, GenError> {
    let p = random_block_psd(n, seed, None)?;
    let half = p.half_sum();
    let x = real_part(p.x())?.into_matrix();
    Ok(BlockPsd::new(half.clone(), x, half)?)
}

/// `X = aI + bH` with `H` a seeded Hermitian matrix and `A = B = cI`,
/// `c = ||X||_F + 1`.
pub fn segment_offdiag_block(n: usize, seed: u64, a: Complex64, b: Complex64) -> Result<BlockPsd, GenError> {
    if n == 0 {
        return Err(GenError::ZeroOrder);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_hermitian(n, &mut rng);
    let x = &ComplexMatrix::identity(n).scale(a) + &h.as_matrix().scale(b);
    let c = x.frobenius_norm() + 1.0;
    let diag = HermitianMatrix::identity(n).scale(c);
    Ok(BlockPsd::new(diag.clone(), x, diag)?)
}

/// `A = diag(alpha, 1/alpha)`, `B = diag(1/alpha, alpha)`, `X = I`.
pub fn alpha_example(alpha: f64) -> Result<BlockPsd, GenError> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(GenError::AlphaOutOfRange(alpha));
    }
    let a = HermitianMatrix::from_real_diagonal(&[alpha, 1.0 / alpha]);
    let b = HermitianMatrix::from_real_diagonal(&[1.0 / alpha, alpha]);
    Ok(BlockPsd::new(a, ComplexMatrix::identity(2), b)?)
}

/// `X = U diag(z1, z2) U*` with random unitary `U`; `A = B = cI`,
/// `c = max |z_k| + 1`.
pub fn normal_2x2_offdiag_block(seed: u64) -> Result<BlockPsd, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(2, &mut rng);
    let z = [complex_gaussian(&mut rng), complex_gaussian(&mut rng)];
    let x = &(&u * &ComplexMatrix::from_diagonal(&z)) * &u.adjoint();
    let c = z[0].norm().max(z[1].norm()) + 1.0;
    let diag = HermitianMatrix::identity(2).scale(c);
    Ok(BlockPsd::new(diag.clone(), x, diag)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        for family in Family::ALL {
            let n = if matches!(family, Family::Normal2x2Offdiag | Family::AlphaExample) {
                2
            } else {
                3
            };
            let spec = GeneratorSpec::new(family, n, 17);
            assert_eq!(spec.generate().unwrap(), spec.generate().unwrap(), "{family}");
        }
        assert_ne!(
            random_block_psd(3, 1, None).unwrap(),
            random_block_psd(3, 2, None).unwrap()
        );
    }

    #[test]
    fn rank_controls_full_matrix_rank() {
        let b = random_block_psd(3, 5, Some(1)).unwrap();
        let spec = b.assemble().eigenvalues().unwrap();
        let top = spec.max();
        let numerically_nonzero = spec.values().iter().filter(|&&l| l > 1e-10 * top).count();
        assert_eq!(numerically_nonzero, 1);

        let b = random_block_psd(3, 5, None).unwrap();
        assert!(b.assemble().eigenvalues().unwrap().min() > 0.0);
        assert_eq!(
            random_block_psd(2, 0, Some(5)),
            Err(GenError::RankOutOfRange { rank: 5, max: 4 })
        );
    }

    #[test]
    fn hermitian_offdiag_structure() {
        for seed in 0..50 {
            let b = hermitian_x_block(1 + seed as usize % 6, seed).unwrap();
            assert_eq!(b.x(), &b.x().adjoint());
            assert_eq!(b.a(), b.b());
        }
    }

    #[test]
    fn alpha_example_spectrum() {
        let spec = alpha_example(4.0).unwrap().assemble().eigenvalues().unwrap();
        let want = [4.25, 4.25, 0.0, 0.0];
        for (l, w) in spec.values().iter().zip(want) {
            assert!((l - w).abs() < 1e-12, "{spec:?}");
        }
        assert_eq!(alpha_example(1.0), Err(GenError::AlphaOutOfRange(1.0)));
        assert!(alpha_example(0.5).is_err());
    }

    #[test]
    fn normal_offdiag_is_normal() {
        for seed in 0..50 {
            let b = normal_2x2_offdiag_block(seed).unwrap();
            let x = b.x();
            let xs = x.adjoint();
            let comm = (x * &xs).max_abs_diff(&(&xs * x));
            assert!(comm <= 1e-12 * (1.0 + x.max_abs()).powi(2), "seed {seed}: {comm}");
        }
    }

    #[test]
    fn segment_special_cases() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let b = segment_offdiag_block(3, 4, Complex64::new(0.0, 2.0), zero).unwrap();
        assert_eq!(b.x(), &ComplexMatrix::identity(3).scale(Complex64::new(0.0, 2.0)));
        let b = segment_offdiag_block(3, 4, zero, one).unwrap();
        assert!(b.x_is_hermitian());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..10 {
            let u = random_unitary(n, &mut rng);
            let resid = (&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(n));
            assert!(resid < 1e-13, "n={n}: {resid}");
        }
    }

    #[test]
    fn spec_serde_uses_kebab_case() {
        let spec = GeneratorSpec::new(Family::Normal2x2Offdiag, 2, 9);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"family":"normal-2x2-offdiag","n":2,"seed":9}"#);
        let back: GeneratorSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert_eq!("segment-offdiag".parse::<Family>(), Ok(Family::SegmentOffdiag));
    }
}
