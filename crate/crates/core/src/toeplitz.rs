//! Upper triangular Toeplitz matrices, the nilpotents `S` and `Q`, and the
//! finite-section discretization of the Volterra operator.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{power_norm, spectral_norm, CMatrix, LinalgError, C0, C1, DEFAULT_TOL};

/// Largest order accepted by the structured Volterra norm estimate.
pub const VOLTERRA_MAX_M: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToeplitzError {
    #[error("matrix is not nilpotent: |A^n| = {residual:.3e}")]
    NotNilpotent { residual: f64 },
    #[error("expected a strictly upper triangular matrix with unit superdiagonal: {0}")]
    Shape(String),
    #[error("order must satisfy 1 <= m <= {max}, got {m}")]
    OrderOutOfRange { m: usize, max: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `sum_k z_k S^k`: the constant value `z[k]` fills the `k`-th superdiagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperToeplitz {
    pub z: Vec<Complex64>,
}

impl UpperToeplitz {
    pub fn new(z: Vec<Complex64>) -> Self {
        assert!(!z.is_empty(), "upper Toeplitz matrix needs order >= 1");
        UpperToeplitz { z }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n(), |i, j| if j >= i { self.z[j - i] } else { C0 })
    }

    /// Reads the first row of an upper triangular Toeplitz matrix.
    pub fn from_matrix(a: &CMatrix) -> Self {
        UpperToeplitz { z: (0..a.n()).map(|j| a[(0, j)]).collect() }
    }
}

/// Ones on the first superdiagonal.
pub fn shift_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, |i, j| if j == i + 1 { C1 } else { C0 })
}

/// Ones strictly above the diagonal.
pub fn ones_nilpotent(n: usize) -> CMatrix {
    CMatrix::from_fn(n, |i, j| if j > i { C1 } else { C0 })
}

/// A Toeplitz matrix generates the whole upper triangular Toeplitz algebra
/// exactly when its first superdiagonal is nonzero.
pub fn is_generator(r: &UpperToeplitz) -> bool {
    if r.n() == 1 {
        return true;
    }
    let scale = r.z.iter().map(|z| z.norm()).fold(0.0, f64::max);
    r.z[1].norm() > 1e-12 * scale
}

/// `sum_{k=1}^{n-1} (-1)^{k+1} A^k` for nilpotent `A`, summed directly.
pub fn alternating_sum(a: &CMatrix) -> Result<CMatrix, ToeplitzError> {
    let n = a.n();
    let scale = a.frobenius_norm().max(1.0);
    let top = a.pow(n).frobenius_norm();
    if top > DEFAULT_TOL * scale.powi(n as i32) {
        return Err(ToeplitzError::NotNilpotent { residual: top });
    }
    let mut sum = CMatrix::zeros(n);
    let mut power = CMatrix::identity(n);
    for k in 1..n {
        power = &power * a;
        sum = if k % 2 == 1 { &sum + &power } else { &sum - &power };
    }
    Ok(sum)
}

/// For `A` strictly upper triangular with unit superdiagonal: is the
/// alternating sum of its powers a contraction?
///
/// Among such matrices only `Q` passes, so `true` should coincide with `A = Q`.
pub fn alternating_sum_is_contraction(a: &CMatrix, tol: f64) -> Result<bool, ToeplitzError> {
    let n = a.n();
    for i in 0..n {
        for j in 0..=i {
            if a[(i, j)].norm() > tol {
                return Err(ToeplitzError::Shape(format!("entry ({}, {}) is nonzero", i + 1, j + 1)));
            }
        }
        if i + 1 < n && (a[(i, i + 1)] - C1).norm() > tol {
            return Err(ToeplitzError::Shape(format!("superdiagonal entry ({}, {}) is not 1", i + 1, i + 2)));
        }
    }
    Ok(spectral_norm(&alternating_sum(a)?)? <= 1.0 + tol)
}

/// `(i/m)(I + 2Q)` of order `m`.
pub fn volterra_discretization(m: usize) -> CMatrix {
    let d = Complex64::new(0.0, 1.0 / m as f64);
    CMatrix::from_fn(m, |j, k| match j.cmp(&k) {
        std::cmp::Ordering::Equal => d,
        std::cmp::Ordering::Less => d * 2.0,
        std::cmp::Ordering::Greater => C0,
    })
}

/// Spectral norm of [`volterra_discretization`]`(m)` by power iteration,
/// applying the matrix in O(m) through suffix/prefix sums.
pub fn volterra_norm_estimate(m: usize) -> Result<f64, ToeplitzError> {
    if m == 0 || m > VOLTERRA_MAX_M {
        return Err(ToeplitzError::OrderOutOfRange { m, max: VOLTERRA_MAX_M });
    }
    let h = 1.0 / m as f64;
    // (i/m)(x_j + 2 sum_{k>j} x_k)
    let apply = |x: &[Complex64]| {
        let mut y = vec![C0; m];
        let mut tail = C0;
        for j in (0..m).rev() {
            y[j] = Complex64::new(0.0, h) * (x[j] + tail * 2.0);
            tail += x[j];
        }
        y
    };
    // (-i/m)(x_j + 2 sum_{k<j} x_k)
    let apply_adjoint = |x: &[Complex64]| {
        let mut y = vec![C0; m];
        let mut head = C0;
        for j in 0..m {
            y[j] = Complex64::new(0.0, -h) * (x[j] + head * 2.0);
            head += x[j];
        }
        y
    };
    Ok(power_norm(m, apply, apply_adjoint, 0x5eed)?)
}

/// One row of the convergence study.
#[derive(Clone, Debug, PartialEq)]
pub struct VolterraPoint {
    pub m: usize,
    pub estimate: f64,
    /// `estimate - 4/pi`
    pub gap: f64,
}

pub fn volterra_limit() -> f64 {
    4.0 / std::f64::consts::PI
}

/// Estimates for each `m`, computed in parallel and returned in input order.
pub fn volterra_sweep(ms: &[usize]) -> Result<Vec<VolterraPoint>, ToeplitzError> {
    ms.par_iter()
        .map(|&m| {
            let estimate = volterra_norm_estimate(m)?;
            Ok(VolterraPoint { m, estimate, gap: estimate - volterra_limit() })
        })
        .collect()
}

/// Richardson extrapolation from estimates at `m` and `2m`, assuming an
/// error of the form `c / m^order`.
pub fn richardson(e_m: f64, e_2m: f64, order: f64) -> f64 {
    let f = 2f64.powf(order);
    (f * e_2m - e_m) / (f - 1.0)
}

/// Limit and observed order from estimates at `m`, `2m`, `4m`; the order is
/// `log2` of the ratio of successive differences. `None` when the
/// differences do not shrink geometrically.
pub fn richardson_limit(e_m: f64, e_2m: f64, e_4m: f64) -> Option<(f64, f64)> {
    let (d1, d2) = (e_2m - e_m, e_4m - e_2m);
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() || d2.abs() >= d1.abs() {
        return None;
    }
    let order = (d1 / d2).log2();
    Some((richardson(e_2m, e_4m, order), order))
}
