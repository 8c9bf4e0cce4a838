use num_complex::Complex64;

use super::{CMatrix, LinalgError, Result, C0};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi. Only the Hermitian part `(H + H*)/2` is used.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen> {
    let n = h.n();
    let mut a = CMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    let floor = f64::EPSILON * 1e-3 * scale;
    let mut sweeps = 0;
    loop {
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { routine: "hermitian jacobi", iterations: sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let g = a[(p, q)];
                let gabs = g.norm();
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                if gabs <= floor || gabs <= f64::EPSILON * (app * aqq).abs().sqrt() {
                    a[(p, q)] = C0;
                    a[(q, p)] = C0;
                    continue;
                }
                rotated = true;
                let e = (g / gabs).conj();
                let theta = (aqq - app) / (2.0 * gabs);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, e) * [[c, s], [-s, c]]
                let g11 = Complex64::new(c, 0.0);
                let g12 = Complex64::new(s, 0.0);
                let g21 = e * (-s);
                let g22 = e * c;
                apply_right(&mut a, p, q, g11, g12, g21, g22);
                apply_left_adjoint(&mut a, p, q, g11, g12, g21, g22);
                apply_right(&mut v, p, q, g11, g12, g21, g22);
                a[(p, q)] = C0;
                a[(q, p)] = C0;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

pub fn hermitian_eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(h)?.values)
}

fn apply_right(m: &mut CMatrix, p: usize, q: usize, g11: Complex64, g12: Complex64, g21: Complex64, g22: Complex64) {
    for i in 0..m.n() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = x * g11 + y * g21;
        m[(i, q)] = x * g12 + y * g22;
    }
}

fn apply_left_adjoint(m: &mut CMatrix, p: usize, q: usize, g11: Complex64, g12: Complex64, g21: Complex64, g22: Complex64) {
    for j in 0..m.n() {
        let (x, y) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = g11.conj() * x + g21.conj() * y;
        m[(q, j)] = g12.conj() * x + g22.conj() * y;
    }
}
