//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classic real Jacobi rotation. Sweeps stop once
//! the off-diagonal Frobenius mass drops below `1e-13 * ||H||_F`.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix, MatError, Spectrum};

/// Sweep budget before [`MatError::NoConvergence`] is reported.
pub const MAX_SWEEPS: usize = 30;

const REL_OFF_TOL: f64 = 1e-13;

/// Eigenvalues in non-increasing order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Spectrum,
    /// `vectors[k]` is a unit eigenvector for `values.values()[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl Eigen {
    /// `sum_k lambda_k v_k v_k*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.len();
        let vals = self.values.values();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[k][i] * self.vectors[k][j].conj() * vals[k])
                .sum()
        })
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn hermitian_eig(h: &HermitianMatrix) -> Result<Eigen, MatError> {
    let n = h.order();
    let mut a: Vec<Complex64> = h.as_matrix().as_slice().to_vec();
    let mut v: Vec<Complex64> = ComplexMatrix::identity(n).as_slice().to_vec();
    let target = REL_OFF_TOL * h.as_matrix().frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= target {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(MatError::NoConvergence { sweeps: sweep, off });
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| (a[k * n + k].re, (0..n).map(|i| v[i * n + k]).collect()))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (values, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = pairs.into_iter().unzip();
    Ok(Eigen {
        values: Spectrum::descending(values),
        vectors,
    })
}

/// Annihilates `a[p][q]` with `A <- U* A U`, `V <- V U`.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau.is_finite() {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U restricted to (p, q) is diag(1, e^{-i phi}) * [[c, s], [-s, c]].
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    for r in 0..n {
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        a[r * n + p] = arp * u_pp + arq * u_qp;
        a[r * n + q] = arp * u_pq + arq * u_qq;
    }
    for col in 0..n {
        let apc = a[p * n + col];
        let aqc = a[q * n + col];
        a[p * n + col] = u_pp.conj() * apc + u_qp.conj() * aqc;
        a[q * n + col] = u_pq.conj() * apc + u_qq.conj() * aqc;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = vrp * u_pp + vrq * u_qp;
        v[r * n + q] = vrp * u_pq + vrq * u_qq;
    }
}
