//! Dense square complex matrices and the spectral routines built on them.
//!
//! Entries are stored row-major. Indexing through `m[(i, j)]` is 0-based;
//! routines that mirror the usual matrix-analysis notation (leading
//! submatrices, consecutive compressions) document their 1-based arguments.

mod hermitian;
mod qr;
mod schur;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use hermitian::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use qr::{least_squares, LeastSquares};
pub use schur::{eigenvalues, hessenberg, schur, spectral_radius, Schur};
pub use svd::{power_norm, singular_values, spectral_norm, spectral_norm_power, svd, Svd};

/// Global default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

pub(crate) const C0: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C1: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const CI: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix must be square with n >= 1 (got {rows} rows, row lengths {detail})")]
    NotSquare { rows: usize, detail: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense `n x n` complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![C0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C1;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from rows, checking squareness and finiteness.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            let detail = rows.iter().map(|r| r.len().to_string()).collect::<Vec<_>>().join(",");
            return Err(LinalgError::NotSquare { rows: n, detail });
        }
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite { row: k / n, col: k % n });
        }
        Ok(CMatrix { n, data })
    }

    /// Real-valued convenience constructor; panics on ragged input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| {
            assert_eq!(rows[i].len(), n, "ragged row {i}");
            Complex64::new(rows[i][j], 0.0)
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self + c I`
    pub fn shift_diag(&self, c: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += c;
        }
        m
    }

    /// Leading `k x k` principal submatrix, `1 <= k <= n`.
    pub fn leading_submatrix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(LinalgError::IndexOutOfRange { index: k, max: self.n });
        }
        Ok(Self::from_fn(k, |i, j| self[(i, j)]))
    }

    /// Largest modulus strictly below the diagonal.
    pub fn lower_max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                m = m.max(self[(i, j)].norm());
            }
        }
        m
    }

    pub fn is_upper_triangular(&self, tol: f64) -> bool {
        self.lower_max_abs() <= tol
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `max |a_ij - b_ij|`; panics on order mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }
}

/// `A B`, or a dimension error.
pub fn mat_mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.n != b.n {
        return Err(LinalgError::DimensionMismatch { left: a.n, right: b.n });
    }
    Ok(a * b)
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.trace()
}

pub fn leading_submatrix(a: &CMatrix, k: usize) -> Result<CMatrix> {
    a.leading_submatrix(k)
}

/// Kronecker product, of order `a.n() * b.n()`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = (a.n, b.n);
    CMatrix::from_fn(p * q, |r, c| a[(r / q, c / q)] * b[(r % q, c % q)])
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix order mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix order mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix order mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(-C1)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.n, self.n)?;
        for row in self.rows() {
            let cells: Vec<String> =
                row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A unitary matrix together with its measured departure from unitarity.
#[derive(Clone, Debug)]
pub struct UnitaryWitness {
    pub u: CMatrix,
    /// `||U* U - I||_F`
    pub unitarity_residual: f64,
}

impl UnitaryWitness {
    pub fn new(u: CMatrix) -> Self {
        let unitarity_residual = unitarity_residual(&u);
        UnitaryWitness { u, unitarity_residual }
    }

    pub fn identity(n: usize) -> Self {
        UnitaryWitness { u: CMatrix::identity(n), unitarity_residual: 0.0 }
    }
}

pub fn unitarity_residual(u: &CMatrix) -> f64 {
    (&(&u.adjoint() * u) - &CMatrix::identity(u.n())).frobenius_norm()
}

/// `U* A U`
pub fn unitary_conjugate(a: &CMatrix, u: &CMatrix) -> CMatrix {
    &(&u.adjoint() * a) * u
}
