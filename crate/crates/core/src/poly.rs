//! Univariate complex polynomials and their action on matrices.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{least_squares, CMatrix, C0, C1};

/// Coefficients with modulus below this are trimmed from the top.
const TRIM: f64 = 1e-300;
/// Relative Krylov residual below which a power is declared dependent.
const DEPENDENCE_RATIO: f64 = 1e-10;
/// Residuals in `[DEPENDENCE_RATIO, AMBIGUOUS_RATIO)` are too close to call.
const AMBIGUOUS_RATIO: f64 = 1e-7;
/// Powers below this multiple of `|A|_F^d` count as zero.
const NEGLIGIBLE_POWER: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("target is not in the algebra generated by R: residual {residual:.3e} exceeds {threshold:.3e}")]
    NotInAlgebra { residual: f64, threshold: f64 },
    #[error("numerical rank ambiguous at degree {degree}: relative Krylov residual {ratio:.3e}")]
    AmbiguousRank { degree: usize, ratio: f64 },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// `sum_k coeffs[k] t^k`, with no zero leading coefficient stored.
#[derive(Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() < TRIM) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![C0; k + 1];
        c[k] = C1;
        Polynomial { coeffs: c }
    }

    /// `t - root`
    pub fn linear(root: Complex64) -> Self {
        Self::new(vec![-root, C1])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(C1), |acc, &r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(C0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(C1 / self.leading())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(C0, |acc, &c| acc * z + c)
    }

    /// Horner evaluation `f(A)`; the constant term contributes `c0 I`.
    pub fn eval_matrix(&self, a: &CMatrix) -> CMatrix {
        let n = a.n();
        let mut acc = CMatrix::zeros(n);
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if k + 1 < self.coeffs.len() {
                acc = &acc * a;
            }
            acc = acc.shift_diag(c);
        }
        acc
    }

    /// `self(g(t))`
    pub fn compose(&self, g: &Polynomial) -> Polynomial {
        self.coeffs.iter().rev().fold(Polynomial::zero(), |acc, &c| &(&acc * g) + &Polynomial::constant(c))
    }

    /// Long division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if ds < dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let lead = d.leading();
        let mut q = vec![C0; ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let f = r[k + dd] / lead;
            q[k] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= f * dc;
            }
            r[k + dd] = C0;
        }
        r.truncate(dd);
        Ok((Polynomial::new(q), Polynomial::new(r)))
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial, k: usize| p.coeffs.get(k).copied().unwrap_or(C0);
        Polynomial::new((0..len).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(-C1)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C0)
            .map(|(k, c)| format!("({:+}{:+}i)t^{k}", c.re, c.im))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn eval_matrix(f: &Polynomial, a: &CMatrix) -> CMatrix {
    f.eval_matrix(a)
}

pub fn compose(f: &Polynomial, g: &Polynomial) -> Polynomial {
    f.compose(g)
}

fn vectorize(m: &CMatrix) -> Vec<Complex64> {
    m.as_slice().to_vec()
}

/// Monic polynomial of least degree annihilating `A`.
///
/// Powers of `A - mu I` (`mu` the mean eigenvalue) are orthogonalized in the
/// Frobenius inner product; the first power whose relative residual drops
/// below `1e-10` fixes the dependence. The result is translated back by
/// `t -> t - mu`.
pub fn minimal_polynomial(a: &CMatrix) -> Result<Polynomial, PolyError> {
    let n = a.n();
    let mu = a.trace() / n as f64;
    let shifted = a.shift_diag(-mu);
    let scale = a.frobenius_norm();

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    // r[j] holds the Gram-Schmidt coefficients of power j
    let mut r: Vec<Vec<Complex64>> = Vec::new();
    let mut power = CMatrix::identity(n);
    for d in 0..=n {
        if d > 0 {
            power = &power * &shifted;
        }
        let v = vectorize(&power);
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut resid = v.clone();
        let mut h = vec![C0; basis.len()];
        for _ in 0..2 {
            for (j, q) in basis.iter().enumerate() {
                let c: Complex64 = q.iter().zip(&resid).map(|(x, y)| x.conj() * y).sum();
                h[j] += c;
                resid.iter_mut().zip(q).for_each(|(x, qi)| *x -= qi * c);
            }
        }
        let rnorm = resid.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let vanished = vnorm <= NEGLIGIBLE_POWER * scale.powi(d as i32);
        let ratio = if vanished { 0.0 } else { rnorm / vnorm };
        if ratio < DEPENDENCE_RATIO {
            // solve R c = h (upper triangular) for power^d = sum_j c_j power^j
            let mut c = vec![C0; d];
            for i in (0..d).rev() {
                let mut s = h[i];
                for (j, cj) in c.iter().enumerate().skip(i + 1) {
                    s -= r[j][i] * cj;
                }
                c[i] = s / r[i][i];
            }
            let mut coeffs: Vec<Complex64> = c.into_iter().map(|x| -x).collect();
            coeffs.push(C1);
            let in_shifted = Polynomial::new(coeffs);
            return Ok(in_shifted.compose(&Polynomial::linear(mu)));
        }
        if ratio < AMBIGUOUS_RATIO || d == n {
            return Err(PolyError::AmbiguousRank { degree: d, ratio });
        }
        let mut col = h;
        col.push(Complex64::new(rnorm, 0.0));
        r.push(col);
        basis.push(resid.into_iter().map(|x| x / rnorm).collect());
    }
    unreachable!("Cayley-Hamilton bounds the loop")
}

/// `poly(t - center)`: a polynomial kept in Taylor form about `center`.
///
/// Generator polynomials of a matrix whose spectrum sits at `z0` have
/// coefficients of size `|z1|^{-k}` in powers of `t - z0`; expanding them in
/// powers of `t` multiplies these by binomial factors `|z0|^k` and destroys
/// the cancellation that makes `g(R)` small. Evaluation therefore happens in
/// the shifted variable.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteredPolynomial {
    pub center: Complex64,
    pub poly: Polynomial,
}

impl CenteredPolynomial {
    pub fn new(center: Complex64, poly: Polynomial) -> Self {
        CenteredPolynomial { center, poly }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poly.eval(z - self.center)
    }

    pub fn eval_matrix(&self, a: &CMatrix) -> CMatrix {
        self.poly.eval_matrix(&a.shift_diag(-self.center))
    }

    /// Coefficients in powers of `t`.
    pub fn to_monomial(&self) -> Polynomial {
        self.poly.compose(&Polynomial::linear(self.center))
    }

    /// `self(inner(t))`, centered where `inner` is.
    pub fn compose(&self, inner: &CenteredPolynomial) -> CenteredPolynomial {
        let shifted_inner = &inner.poly - &Polynomial::constant(self.center);
        CenteredPolynomial::new(inner.center, self.poly.compose(&shifted_inner))
    }
}

/// Polynomial `g` of degree `< n` with `g(R) = T`, centered at the mean
/// eigenvalue `mu` of `R`.
///
/// Solved by column-pivoted least squares over the powers of `R - mu I`; the
/// residual `|g(R) - T|_F` is checked against `tol * |T|_F` after the fact.
pub fn generator_polynomial(r: &CMatrix, t: &CMatrix, tol: f64) -> Result<CenteredPolynomial, PolyError> {
    let n = r.n();
    if t.n() != n {
        return Err(PolyError::OrderMismatch { left: n, right: t.n() });
    }
    let mu = r.trace() / n as f64;
    let shifted = r.shift_diag(-mu);
    let mut cols = Vec::with_capacity(n);
    let mut power = CMatrix::identity(n);
    for k in 0..n {
        if k > 0 {
            power = &power * &shifted;
        }
        cols.push(vectorize(&power));
    }
    let ls = least_squares(&cols, &vectorize(t), 1e-14);
    let g = CenteredPolynomial::new(mu, Polynomial::new(ls.coeffs));
    let residual = (&g.eval_matrix(r) - t).frobenius_norm();
    let threshold = tol * t.frobenius_norm().max(f64::MIN_POSITIVE);
    if residual > threshold {
        return Err(PolyError::NotInAlgebra { residual, threshold });
    }
    Ok(g)
}
