use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CMatrix, LinalgError, Result, C0};

const MAX_SWEEPS: usize = 80;
const POWER_MAX_ITER: usize = 10_000;
const POWER_REL_TOL: f64 = 1e-14;

/// Singular value decomposition `A = U diag(sigma) V*`, values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of a working copy of `A` are rotated pairwise until mutually
/// orthogonal; the same rotations accumulate into `V`. Column norms are then
/// the singular values.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let n = a.n();
    // column-major working copies
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { super::C1 } else { C0 }).collect()).collect();
    let eps = f64::EPSILON;
    // a column this small is noise at working precision; rotating it against
    // a large column only regenerates rounding error
    // inner products of length-n columns carry rounding error of order n eps
    let tol = eps * n as f64;
    let negligible = (eps * 1e-3 * a.frobenius_norm()).powi(2);

    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { routine: "jacobi svd", iterations: sweeps });
        }
        sweeps += 1;
        converged = true;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                converged = false;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let sp = phase.conj() * s;
                let sq = phase * s;
                rotate(&mut w, p, q, c, sp, sq);
                rotate(&mut v, p, q, c, sp, sq);
            }
        }
    }

    let mut sigma: Vec<f64> = w.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let u = CMatrix::from_fn(n, |i, k| {
        let j = order[k];
        if sigma[j] > 0.0 {
            w[j][i] / sigma[j]
        } else {
            C0
        }
    });
    let vm = CMatrix::from_fn(n, |i, k| v[order[k]][i]);
    sigma = order.iter().map(|&j| sigma[j]).collect();
    Ok(Svd { u, sigma, v: vm })
}

// a_p <- c a_p - sp a_q ;  a_q <- sq a_p + c a_q
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, sp: Complex64, sq: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = xp * c - sp * yq;
        *y = sq * xp + yq * c;
    }
}

pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

/// Largest singular value `sqrt(spr(A* A))`.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    if a.as_slice().iter().all(|z| *z == C0) {
        return Ok(0.0);
    }
    Ok(svd(a)?.sigma[0])
}

/// Power iteration for the largest singular value of an operator given by
/// its action and adjoint action on vectors of length `dim`.
///
/// Iterates `x <- A* A x / |A* A x|` and stops once successive Rayleigh
/// quotients satisfy `|l_{k+1} - l_k| <= 1e-14 l_k`.
pub fn power_norm<F, G>(dim: usize, apply: F, apply_adjoint: G, seed: u64) -> Result<f64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
    G: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    normalize(&mut x);
    let mut prev = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let ax = apply(&x);
        let lambda: f64 = ax.iter().map(|z| z.norm_sqr()).sum();
        if lambda == 0.0 {
            // x landed in the kernel; restart from a fresh direction
            if prev.is_nan() {
                x = (0..dim).map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>())).collect();
                normalize(&mut x);
                prev = 0.0;
                continue;
            }
            return Ok(0.0);
        }
        if (lambda - prev).abs() <= POWER_REL_TOL * lambda {
            return Ok(lambda.sqrt());
        }
        prev = lambda;
        x = apply_adjoint(&ax);
        if normalize(&mut x) == 0.0 {
            return Ok(0.0);
        }
    }
    Err(LinalgError::NoConvergence { routine: "power iteration", iterations: POWER_MAX_ITER })
}

/// Dense-matrix spectral norm by power iteration on `A* A`.
pub fn spectral_norm_power(a: &CMatrix, seed: u64) -> Result<f64> {
    if a.as_slice().iter().all(|z| *z == C0) {
        return Ok(0.0);
    }
    let adj = a.adjoint();
    power_norm(a.n(), |x| a.mul_vec(x), |y| adj.mul_vec(y), seed)
}

fn normalize(x: &mut [Complex64]) -> f64 {
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        x.iter_mut().for_each(|z| *z /= nrm);
    }
    nrm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C1;

    #[test]
    fn negligible_column_does_not_stall() {
        let mut a = CMatrix::zeros(4);
        a[(0, 1)] = Complex64::new(-2.7755575615628914e-17, 0.0);
        a[(0, 2)] = Complex64::new(1.106161052188464, -0.5200781100619862);
        a[(0, 3)] = Complex64::new(-0.30951953038610014, 1.1188251560956641);
        a[(1, 2)] = Complex64::new(1.1102230246251565e-16, 0.0);
        a[(1, 3)] = Complex64::new(1.1725743558390962, -2.325720098460039);
        let d = svd(&a).unwrap();
        let rec = &(&d.u * &CMatrix::diag(&d.sigma.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()))
            * &d.v.adjoint();
        assert!((&rec - &a).frobenius_norm() < 1e-14);
    }

    #[test]
    fn graded_columns_converge() {
        let e = [
            (0.0, 0.0), (8.843316882631706, 0.0), (-4.336116518226078, 6.736640942776074),
            (-5.040664901731367, 50.186152867376364), (0.0, 0.0), (0.0, 0.0), (1.4013104423388312, 0.0),
            (0.7801970223254852, 9.329342838696103), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0),
            (6.06415922113326, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0),
        ];
        let a = CMatrix::from_fn(4, |i, j| Complex64::new(e[4 * i + j].0, e[4 * i + j].1));
        let d = svd(&a).unwrap();
        let rec = &(&d.u * &CMatrix::diag(&d.sigma.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()))
            * &d.v.adjoint();
        assert!((&rec - &a).frobenius_norm() < 1e-13 * a.frobenius_norm());
    }

    #[test]
    fn zero_matrix_has_zero_norm() {
        assert_eq!(spectral_norm(&CMatrix::zeros(4)).unwrap(), 0.0);
        assert_eq!(spectral_norm_power(&CMatrix::zeros(4), 1).unwrap(), 0.0);
    }

    #[test]
    fn single_entry_2x2() {
        for alpha in [0.3, 1.0, 7.5] {
            let a = CMatrix::from_real(&[&[0.0, alpha], &[0.0, 0.0]]);
            assert!((spectral_norm(&a).unwrap() - alpha).abs() < 1e-15);
        }
    }

    #[test]
    fn strictly_upper_3x3_without_corner() {
        // a13 = 0 in |A|^2 = (s + sqrt(s^2 - 4 a^2 b^2)) / 2 with s = a^2 + b^2
        for (alpha, beta) in [(1.0, 2.0), (3.0, 0.5), (1.5, 1.5)] {
            let a = CMatrix::from_real(&[&[0., alpha, 0.], &[0., 0., beta], &[0., 0., 0.]]);
            let got = spectral_norm(&a).unwrap();
            assert!((got - f64::max(alpha, beta)).abs() < 1e-14, "{got}");
        }
    }

    #[test]
    fn svd_reconstructs() {
        let a = CMatrix::from_fn(5, |i, j| Complex64::new((i * 3 + j) as f64 % 4.0 - 1.5, (i as f64 - j as f64) * 0.3));
        let d = svd(&a).unwrap();
        let sig = CMatrix::diag(&d.sigma.iter().map(|&s| Complex64::new(s, 0.0)).collect::<Vec<_>>());
        let rec = &(&d.u * &sig) * &d.v.adjoint();
        assert!((&rec - &a).frobenius_norm() < 1e-12);
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn power_route_matches_jacobi() {
        let a = CMatrix::from_fn(6, |i, j| Complex64::new(((i + 1) * (j + 2)) as f64 % 5.0, if i < j { C1.re } else { 0.0 }));
        let p = spectral_norm_power(&a, 7).unwrap();
        let j = spectral_norm(&a).unwrap();
        assert!((p - j).abs() < 1e-10 * j, "{p} vs {j}");
    }
}
