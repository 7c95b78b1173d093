//! Ky Fan norms and anti-norms, (weak) majorization, pinchings and the
//! direct-sum lemma.
//!
//! Everything is decided from sorted eigenvalue partial sums. `A ≺_w B` means
//! every Ky Fan norm of `A` is at most that of `B`; `A ≺ B` adds equality of
//! traces. Anti-norm dominance compares sums of the `k` smallest eigenvalues
//! in the opposite direction.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::matcore::{ComplexMatrix, HermitianMatrix, MatError, Spectrum, EIG_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MajorizeError {
    #[error("k = {k} is out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("basis is not orthonormal: Gram residual {residual:.3e}")]
    NonOrthonormalBasis { residual: f64 },
    #[error("expected an even order, got {0}")]
    OddOrder(usize),
    #[error("pair {index} does not satisfy the majorization A_k ≺ B_k (slack {})", report.min_slack.min(-report.trace_gap.abs()))]
    PairFails {
        index: usize,
        report: Box<MajorizationReport>,
    },
    #[error("empty list of pairs")]
    NoPairs,
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Default majorization tolerance `1e-9 * max(1, trace B)`.
pub fn maj_tol(trace_b: f64) -> f64 {
    1e-9 * trace_b.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// Ky Fan partial sums of the left side are dominated by the right side.
    Majorization,
    /// Ky Fan anti-norm partial sums of the left side dominate the right side.
    AntinormDominance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MajorizationVerdict {
    Holds,
    Fails,
    HoldsWeaklyOnly,
}

/// Partial-sum evidence for a majorization or anti-norm comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub relation: Relation,
    pub k_partial_sums_left: Vec<f64>,
    pub k_partial_sums_right: Vec<f64>,
    /// Smallest oriented per-k slack; non-negative when every inequality holds.
    pub min_slack: f64,
    /// `trace(left) - trace(right)`.
    pub trace_gap: f64,
    pub verdict: MajorizationVerdict,
    /// 1-based index attaining `min_slack`.
    pub worst_k: usize,
    pub tol: f64,
}

impl MajorizationReport {
    pub fn holds(&self) -> bool {
        self.verdict == MajorizationVerdict::Holds
    }

    /// Weak majorization (or anti-norm dominance) holds regardless of traces.
    pub fn holds_weakly(&self) -> bool {
        self.verdict != MajorizationVerdict::Fails
    }

    /// One number summarizing the report: negative beyond `tol` means failure.
    pub fn slack(&self) -> f64 {
        match self.relation {
            Relation::Majorization => self.min_slack.min(-self.trace_gap.abs()),
            Relation::AntinormDominance => self.min_slack,
        }
    }
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    Spectrum::descending(v.to_vec()).into_values()
}

fn sorted_asc(v: &[f64]) -> Vec<f64> {
    Spectrum::ascending(v.to_vec()).into_values()
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn check_orders(left: usize, right: usize) -> Result<(), MajorizeError> {
    if left != right || left == 0 {
        return Err(MajorizeError::OrderMismatch { left, right });
    }
    Ok(())
}

/// Majorization `left ≺ right` decided on eigenvalue vectors (any order).
pub fn majorization_of_spectra(left: &[f64], right: &[f64], tol: f64) -> Result<MajorizationReport, MajorizeError> {
    check_orders(left.len(), right.len())?;
    let l = prefix_sums(&sorted_desc(left));
    let r = prefix_sums(&sorted_desc(right));
    let (worst_k, min_slack) = worst(&l, &r, |a, b| b - a);
    let trace_gap = l[l.len() - 1] - r[r.len() - 1];
    let verdict = if min_slack < -tol {
        MajorizationVerdict::Fails
    } else if trace_gap.abs() > tol {
        MajorizationVerdict::HoldsWeaklyOnly
    } else {
        MajorizationVerdict::Holds
    };
    Ok(MajorizationReport {
        relation: Relation::Majorization,
        k_partial_sums_left: l,
        k_partial_sums_right: r,
        min_slack,
        trace_gap,
        verdict,
        worst_k,
        tol,
    })
}

/// Anti-norm dominance: every sum of the `k` smallest entries of `left` is at
/// least the corresponding sum for `right`.
pub fn antinorm_dominance_of_spectra(
    left: &[f64],
    right: &[f64],
    tol: f64,
) -> Result<MajorizationReport, MajorizeError> {
    check_orders(left.len(), right.len())?;
    let l = prefix_sums(&sorted_asc(left));
    let r = prefix_sums(&sorted_asc(right));
    let (worst_k, min_slack) = worst(&l, &r, |a, b| a - b);
    Ok(MajorizationReport {
        relation: Relation::AntinormDominance,
        trace_gap: l[l.len() - 1] - r[r.len() - 1],
        k_partial_sums_left: l,
        k_partial_sums_right: r,
        min_slack,
        verdict: if min_slack < -tol {
            MajorizationVerdict::Fails
        } else {
            MajorizationVerdict::Holds
        },
        worst_k,
        tol,
    })
}

fn worst(l: &[f64], r: &[f64], slack: impl Fn(f64, f64) -> f64) -> (usize, f64) {
    l.iter()
        .zip(r)
        .enumerate()
        .map(|(k, (&a, &b))| (k + 1, slack(a, b)))
        .fold((1, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc })
}

/// Sum of the `k` largest eigenvalues.
pub fn ky_fan_norm(a: &HermitianMatrix, k: usize) -> Result<f64, MajorizeError> {
    let n = a.order();
    if k == 0 || k > n {
        return Err(MajorizeError::KOutOfRange { k, n });
    }
    Ok(a.eigenvalues()?.values()[..k].iter().sum())
}

/// Sum of the `k` smallest eigenvalues.
pub fn ky_fan_antinorm(a: &HermitianMatrix, k: usize) -> Result<f64, MajorizeError> {
    let n = a.order();
    if k == 0 || k > n {
        return Err(MajorizeError::KOutOfRange { k, n });
    }
    Ok(a.eigenvalues()?.reversed().values()[..k].iter().sum())
}

/// `A ≺_w B`; the report's verdict also records whether traces agree.
pub fn weak_majorization(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationReport, MajorizeError> {
    majorization(a, b, tol)
}

/// `A ≺ B`.
pub fn majorization(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<MajorizationReport, MajorizeError> {
    check_orders(a.order(), b.order())?;
    majorization_of_spectra(a.eigenvalues()?.values(), b.eigenvalues()?.values(), tol)
}

/// `||A||_(k)! >= ||B||_(k)!` for every `k`.
pub fn antinorm_dominance(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationReport, MajorizeError> {
    check_orders(a.order(), b.order())?;
    antinorm_dominance_of_spectra(a.eigenvalues()?.values(), b.eigenvalues()?.values(), tol)
}

/// Largest entry of `|G - I|` for the Gram matrix of `basis`.
pub fn gram_residual(basis: &[Vec<Complex64>]) -> f64 {
    let mut r = 0.0f64;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let dot: Complex64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            r = r.max((dot - want).norm());
        }
    }
    r
}

/// Diagonal of `H` in the orthonormal basis `{e_k}`: `diag(<e_k, H e_k>)`.
pub fn pinch_to_diagonal(h: &HermitianMatrix, basis: &[Vec<Complex64>]) -> Result<HermitianMatrix, MajorizeError> {
    let n = h.order();
    if basis.len() != n {
        return Err(MajorizeError::OrderMismatch {
            left: n,
            right: basis.len(),
        });
    }
    if let Some(v) = basis.iter().find(|v| v.len() != n) {
        return Err(MajorizeError::OrderMismatch {
            left: n,
            right: v.len(),
        });
    }
    let residual = gram_residual(basis);
    if residual > EIG_TOL * n as f64 {
        return Err(MajorizeError::NonOrthonormalBasis { residual });
    }
    let diag: Vec<f64> = basis.iter().map(|e| h.as_matrix().quadratic_form(e).re).collect();
    Ok(HermitianMatrix::from_real_diagonal(&diag))
}

/// Zeroes the off-diagonal `n x n` blocks of an order-`2n` matrix.
pub fn block_diag_pinch(m: &HermitianMatrix) -> Result<HermitianMatrix, MajorizeError> {
    let total = m.order();
    if total % 2 != 0 {
        return Err(MajorizeError::OddOrder(total));
    }
    let n = total / 2;
    Ok(m.sub_block(0, n).direct_sum(&m.sub_block(n, n)))
}

/// Direct sum of a list of Hermitian matrices.
pub fn direct_sum_all(mats: &[HermitianMatrix]) -> Option<HermitianMatrix> {
    let mut it = mats.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, m| acc.direct_sum(m)))
}

/// Checks `A_k ≺ B_k` for every pair, then verifies `⊕A_k ≺ ⊕B_k`.
pub fn lemma1_direct_sum(
    pairs: &[(HermitianMatrix, HermitianMatrix)],
    tol: f64,
) -> Result<MajorizationReport, MajorizeError> {
    if pairs.is_empty() {
        return Err(MajorizeError::NoPairs);
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (index, (a, b)) in pairs.iter().enumerate() {
        check_orders(a.order(), b.order())?;
        let la = a.eigenvalues()?.into_values();
        let lb = b.eigenvalues()?.into_values();
        let report = majorization_of_spectra(&la, &lb, tol)?;
        if !report.holds() {
            return Err(MajorizeError::PairFails {
                index,
                report: Box::new(report),
            });
        }
        left.extend(la);
        right.extend(lb);
    }
    majorization_of_spectra(&left, &right, tol)
}

/// Convenience: a real diagonal matrix as a [`ComplexMatrix`].
pub fn real_diagonal(values: &[f64]) -> ComplexMatrix {
    HermitianMatrix::from_real_diagonal(values).into_matrix()
}
