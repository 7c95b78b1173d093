//! Dense complex matrices, Hermitian spectral decomposition and the 2x2-block
//! machinery shared by the rest of the crate.
//!
//! Everything here is immutable once constructed. Matrices are stored
//! row-major as [`Complex64`] values and every constructor rejects
//! non-finite entries.

mod eigen;

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eigen::{hermitian_eig, Eigen, MAX_SWEEPS};

/// Relative tolerance used for reconstruction and orthonormality checks.
pub const EIG_TOL: f64 = 1e-10;

/// Default relative tolerance for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("expected {expected} entries for the requested shape, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("row {row} has {actual} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, actual: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected an even order, got {0}")]
    OddOrder(usize),
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("{what} is not positive semidefinite: lambda_min = {lambda_min:.6e}, lambda_max = {lambda_max:.6e}")]
    NotPositiveSemidefinite {
        what: String,
        lambda_min: f64,
        lambda_max: f64,
    },
}

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl TryFrom<RawMatrix> for ComplexMatrix {
    type Error = MatError;

    fn try_from(raw: RawMatrix) -> Result<Self, MatError> {
        ComplexMatrix::new(raw.rows, raw.cols, raw.data)
    }
}

impl From<ComplexMatrix> for RawMatrix {
    fn from(m: ComplexMatrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data,
        }
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatError> {
        if rows == 0 || cols == 0 {
            return Err(MatError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MatError::ShapeMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, MatError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(MatError::RaggedRow {
                    row: i,
                    expected: ncols,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(nrows, ncols, data)
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Internal constructor for values produced from already-finite inputs.
    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermitian_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v* M v` for a square matrix.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        let mv = self.mul_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    /// The `size x size` sub-block starting at `(row0, col0)`.
    pub fn sub_block(&self, row0: usize, col0: usize, size: usize) -> Self {
        assert!(row0 + size <= self.rows && col0 + size <= self.cols);
        Self::from_fn(size, size, |i, j| self[(row0 + i, col0 + j)])
    }

    /// Assembles `[tl tr; bl br]` from four blocks of equal order.
    pub fn from_blocks(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Self {
        let n = tl.rows;
        for blk in [tl, tr, bl, br] {
            assert!(blk.rows == n && blk.cols == n, "blocks must share one order");
        }
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => tl[(i, j)],
            (true, false) => tr[(i, j - n)],
            (false, true) => bl[(i - n, j)],
            (false, false) => br[(i - n, j - n)],
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)],
                (false, false) => other[(i - self.rows, j - self.cols)],
                _ => ZERO,
            }
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ in mul");
        let mut data = vec![ZERO; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let out = &mut data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// `(M + M*) / 2`.
pub fn real_part(m: &ComplexMatrix) -> Result<HermitianMatrix, MatError> {
    if !m.is_square() {
        return Err(MatError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(HermitianMatrix::symmetrized(m))
}

/// A square matrix equal to its adjoint, stored in canonical `(M + M*)/2` form.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix(ComplexMatrix);

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = MatError;

    fn try_from(m: ComplexMatrix) -> Result<Self, MatError> {
        HermitianMatrix::new(m)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}

/// Hermiticity tolerance for a matrix with the given largest entry modulus.
pub fn herm_tol(max_entry: f64) -> f64 {
    1e-10 * (1.0 + max_entry)
}

impl HermitianMatrix {
    /// Validates Hermiticity against [`herm_tol`] and stores the symmetrized matrix.
    pub fn new(m: ComplexMatrix) -> Result<Self, MatError> {
        if !m.is_square() {
            return Err(MatError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        let residual = m.hermitian_residual();
        let tol = herm_tol(m.max_abs());
        if residual > tol {
            return Err(MatError::NotHermitian { residual, tol });
        }
        Ok(Self::symmetrized(&m))
    }

    pub(crate) fn symmetrized(m: &ComplexMatrix) -> Self {
        let n = m.rows;
        Self(ComplexMatrix::from_fn(n, n, |i, j| {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self(ComplexMatrix::from_diagonal(&d))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(Complex64::new(s, 0.0)))
    }

    /// `self + t I`.
    pub fn shift(&self, t: f64) -> Self {
        let n = self.order();
        Self(ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.0[(i, j)] + t
            } else {
                self.0[(i, j)]
            }
        }))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self(self.0.direct_sum(&other.0))
    }

    pub fn sub_block(&self, start: usize, size: usize) -> Self {
        Self(self.0.sub_block(start, start, size))
    }

    pub fn eig(&self) -> Result<Eigen, MatError> {
        hermitian_eig(self)
    }

    /// Eigenvalues in non-increasing order.
    pub fn eigenvalues(&self) -> Result<Spectrum, MatError> {
        Ok(hermitian_eig(self)?.values)
    }

    /// `U* H U` for a unitary (or merely square) `U` of matching order.
    pub fn congruence(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrized(&(&(&u.adjoint() * &self.0) * u))
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumOrder {
    Descending,
    Ascending,
}

/// Real eigenvalues together with the order they are sorted in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    order: SpectrumOrder,
}

impl Spectrum {
    pub fn descending(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self {
            values,
            order: SpectrumOrder::Descending,
        }
    }

    pub fn ascending(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            values,
            order: SpectrumOrder::Ascending,
        }
    }

    pub fn order(&self) -> SpectrumOrder {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        match self.order {
            SpectrumOrder::Descending => self.values[0],
            SpectrumOrder::Ascending => self.values[self.values.len() - 1],
        }
    }

    pub fn min(&self) -> f64 {
        match self.order {
            SpectrumOrder::Descending => self.values[self.values.len() - 1],
            SpectrumOrder::Ascending => self.values[0],
        }
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `max - min`, the diameter of the numerical range of a Hermitian matrix.
    pub fn spread(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            values,
            order: match self.order {
                SpectrumOrder::Descending => SpectrumOrder::Ascending,
                SpectrumOrder::Ascending => SpectrumOrder::Descending,
            },
        }
    }

    /// Running sums `s_k = v_1 + ... + v_k` in the stored order.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }
}

/// Verdict of a positive semidefiniteness test with its eigenvalue witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// True iff `lambda_min >= -tol * max(1, lambda_max)`.
pub fn is_positive_semidefinite(h: &HermitianMatrix, tol: f64) -> Result<PsdVerdict, MatError> {
    let spec = h.eigenvalues()?;
    let (lambda_min, lambda_max) = (spec.min(), spec.max());
    Ok(PsdVerdict {
        is_psd: lambda_min >= -tol * lambda_max.max(1.0),
        lambda_min,
        lambda_max,
    })
}

/// A positive semidefinite matrix `[A X; X* B]` with `n x n` blocks.
#[derive(Clone, PartialEq, Serialize)]
pub struct BlockPsd {
    a: HermitianMatrix,
    x: ComplexMatrix,
    b: HermitianMatrix,
}

impl BlockPsd {
    pub fn new(a: HermitianMatrix, x: ComplexMatrix, b: HermitianMatrix) -> Result<Self, MatError> {
        Self::with_tolerance(a, x, b, PSD_TOL)
    }

    pub fn with_tolerance(
        a: HermitianMatrix,
        x: ComplexMatrix,
        b: HermitianMatrix,
        psd_tol: f64,
    ) -> Result<Self, MatError> {
        let n = a.order();
        if b.order() != n {
            return Err(MatError::DimensionMismatch {
                left: n,
                right: b.order(),
            });
        }
        if x.rows() != n || x.cols() != n {
            return Err(MatError::DimensionMismatch {
                left: n,
                right: if x.rows() != n { x.rows() } else { x.cols() },
            });
        }
        let block = Self { a, x, b };
        for (what, h) in [
            ("block A", block.a.clone()),
            ("block B", block.b.clone()),
            ("assembled block matrix", block.assemble()),
        ] {
            let v = is_positive_semidefinite(&h, psd_tol)?;
            if !v.is_psd {
                return Err(MatError::NotPositiveSemidefinite {
                    what: what.to_string(),
                    lambda_min: v.lambda_min,
                    lambda_max: v.lambda_max,
                });
            }
        }
        Ok(block)
    }

    /// Splits an even-order Hermitian matrix into blocks and validates it.
    pub fn from_assembled(m: &HermitianMatrix, psd_tol: f64) -> Result<Self, MatError> {
        let total = m.order();
        if total % 2 != 0 {
            return Err(MatError::OddOrder(total));
        }
        let n = total / 2;
        let a = HermitianMatrix::symmetrized(&m.0.sub_block(0, 0, n));
        let b = HermitianMatrix::symmetrized(&m.0.sub_block(n, n, n));
        let x = m.0.sub_block(0, n, n);
        Self::with_tolerance(a, x, b, psd_tol)
    }

    pub fn n(&self) -> usize {
        self.a.order()
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn b(&self) -> &HermitianMatrix {
        &self.b
    }

    /// `(A + B) / 2`, the normalized partial trace.
    pub fn half_sum(&self) -> HermitianMatrix {
        self.a.add(&self.b).scale(0.5)
    }

    /// `A + B`.
    pub fn partial_trace(&self) -> HermitianMatrix {
        self.a.add(&self.b)
    }

    pub fn assemble(&self) -> HermitianMatrix {
        assemble_block(self)
    }

    pub fn x_is_hermitian(&self) -> bool {
        self.x.hermitian_residual() <= herm_tol(self.x.max_abs())
    }
}

impl fmt::Debug for BlockPsd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockPsd")
            .field("a", &self.a)
            .field("x", &self.x)
            .field("b", &self.b)
            .finish()
    }
}

/// `[A X; X* B]` with `A` in the upper left corner.
pub fn assemble_block(b: &BlockPsd) -> HermitianMatrix {
    let m = ComplexMatrix::from_blocks(&b.a.0, &b.x, &b.x.adjoint(), &b.b.0);
    HermitianMatrix::symmetrized(&m)
}

/// The unitary `(1/sqrt 2) [I -I; I I]` of order `2n`.
pub fn j_unitary(n: usize) -> ComplexMatrix {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = ComplexMatrix::identity(n).scale(s);
    let neg = i.scale(Complex64::new(-1.0, 0.0));
    ComplexMatrix::from_blocks(&i, &neg, &i, &i)
}

/// `J M J*` with `J = (1/sqrt 2) [I -I; I I]`.
///
/// For `M = [A X; X* B]` the diagonal blocks of the result are
/// `(A+B)/2 - Re X` (upper left) and `(A+B)/2 + Re X` (lower right).
pub fn j_congruence(m: &HermitianMatrix) -> Result<HermitianMatrix, MatError> {
    let total = m.order();
    if total % 2 != 0 {
        return Err(MatError::OddOrder(total));
    }
    let j = j_unitary(total / 2);
    Ok(m.congruence(&j.adjoint()))
}

/// Congruence by `diag(I, e^{-i theta} I)`: replaces `X` with `e^{i theta} X`.
pub fn phase_rotate_block(b: &BlockPsd, theta: f64) -> BlockPsd {
    let phase = Complex64::from_polar(1.0, theta);
    BlockPsd {
        a: b.a.clone(),
        x: b.x.scale(phase),
        b: b.b.clone(),
    }
}
