//! Recovering the `(1, n)` entry of a matrix from the norms of its
//! translates along the matrix unit `E_{1n}`.

use num_complex::Complex64;

use super::ReconstructError;
use crate::linalg::{spectral_norm, CMatrix};

const MAX_ITER: usize = 200;
/// Relative sample misfit above which no consistent corner exists.
pub const PLATEAU_TOL: f64 = 1e-8;

/// Result of a corner fit.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerFit {
    pub c: Complex64,
    /// `max_j |F(c, z_j) - h_j| / (1 + h_j)`
    pub residual: f64,
    pub iterations: usize,
}

/// Sample offsets used against a corner whose modulus is at most `bound`.
pub fn sample_offsets(bound: f64) -> Vec<Complex64> {
    let s = 1.0 + 3.0 * bound;
    let i = Complex64::new(0.0, 1.0);
    vec![Complex64::new(0.0, 0.0), s.into(), (-s).into(), i * s, -i * s, (2.0 * s).into()]
}

/// `|M + w E_{1n}|` with the corner of `M` ignored.
pub fn corner_norm(m: &CMatrix, w: Complex64) -> Result<f64, ReconstructError> {
    let mut t = m.clone();
    let n = t.n();
    t[(0, n - 1)] = w;
    Ok(spectral_norm(&t)?)
}

struct Problem<'a> {
    m: &'a CMatrix,
    samples: &'a [(Complex64, f64)],
}

impl Problem<'_> {
    fn residuals(&self, c: Complex64) -> Result<Vec<f64>, ReconstructError> {
        self.samples.iter().map(|&(z, h)| Ok(corner_norm(self.m, c + z)? - h)).collect()
    }

    fn misfit(&self, r: &[f64]) -> f64 {
        r.iter().zip(self.samples).map(|(x, (_, h))| x.abs() / (1.0 + h)).fold(0.0, f64::max)
    }

    // central differences in Re c and Im c
    fn jacobian(&self, c: Complex64) -> Result<Vec<[f64; 2]>, ReconstructError> {
        let d = 1e-6 * (1.0 + c.norm());
        let dirs = [Complex64::new(d, 0.0), Complex64::new(0.0, d)];
        let mut cols = [Vec::new(), Vec::new()];
        for (k, &e) in dirs.iter().enumerate() {
            let up = self.residuals(c + e)?;
            let down = self.residuals(c - e)?;
            cols[k] = up.iter().zip(&down).map(|(u, v)| (u - v) / (2.0 * d)).collect();
        }
        Ok((0..self.samples.len()).map(|j| [cols[0][j], cols[1][j]]).collect())
    }

    /// Levenberg-Marquardt on the two real coordinates of `c`.
    fn solve(&self, start: Complex64) -> Result<CornerFit, ReconstructError> {
        let mut c = start;
        let mut r = self.residuals(c)?;
        let mut cost: f64 = r.iter().map(|x| x * x).sum();
        let mut mu = 1e-3;
        let mut iterations = 0;
        while iterations < MAX_ITER {
            iterations += 1;
            let jac = self.jacobian(c)?;
            let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (row, &rj) in jac.iter().zip(&r) {
                a11 += row[0] * row[0];
                a12 += row[0] * row[1];
                a22 += row[1] * row[1];
                g1 += row[0] * rj;
                g2 += row[1] * rj;
            }
            let mut improved = false;
            for _ in 0..30 {
                let (b11, b22) = (a11 + mu * a11.max(1e-12), a22 + mu * a22.max(1e-12));
                let det = b11 * b22 - a12 * a12;
                if det <= 0.0 || !det.is_finite() {
                    mu *= 4.0;
                    continue;
                }
                let step = Complex64::new(-(b22 * g1 - a12 * g2) / det, -(b11 * g2 - a12 * g1) / det);
                let trial = c + step;
                let rt = self.residuals(trial)?;
                let ct: f64 = rt.iter().map(|x| x * x).sum();
                if ct < cost {
                    let small_step = step.norm() <= 4.0 * f64::EPSILON * (1.0 + c.norm());
                    c = trial;
                    r = rt;
                    cost = ct;
                    mu = (mu / 3.0).max(1e-15);
                    improved = !small_step;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        Ok(CornerFit { c, residual: self.misfit(&r), iterations })
    }
}

/// Finds `c` with `|M + (c + z_j) E_{1n}| = h_j` for every sample.
///
/// Two starts: `c = 0`, and the large-offset estimate
/// `Re c ~ (h(s)^2 - h(-s)^2) / 4s`, `Im c ~ (h(is)^2 - h(-is)^2) / 4s`
/// when the samples contain those offsets. Distinct minima that both fit
/// the data are reported as an error.
pub fn recover_power_corner(m: &CMatrix, samples: &[(Complex64, f64)]) -> Result<CornerFit, ReconstructError> {
    recover_power_corner_with_tol(m, samples, PLATEAU_TOL)
}

/// As [`recover_power_corner`], accepting fits whose relative misfit is at
/// most `plateau_tol`.
pub fn recover_power_corner_with_tol(
    m: &CMatrix,
    samples: &[(Complex64, f64)],
    plateau_tol: f64,
) -> Result<CornerFit, ReconstructError> {
    if samples.len() < 3 {
        return Err(ReconstructError::TooFewSamples(samples.len()));
    }
    let problem = Problem { m, samples };
    let mut starts = vec![Complex64::new(0.0, 0.0)];
    if let Some(est) = asymptotic_estimate(samples) {
        starts.push(est);
    }
    let mut fits = Vec::new();
    for s in starts {
        fits.push(problem.solve(s)?);
    }
    let good: Vec<&CornerFit> = fits.iter().filter(|f| f.residual <= plateau_tol).collect();
    match good.as_slice() {
        [] => {
            let best = fits.iter().map(|f| f.residual).fold(f64::INFINITY, f64::min);
            Err(ReconstructError::Plateau { residual: best })
        }
        [only] => Ok((*only).clone()),
        [first, rest @ ..] => {
            for other in rest {
                if (other.c - first.c).norm() > (1e-6f64).max(1e2 * plateau_tol) * (1.0 + first.c.norm()) {
                    return Err(ReconstructError::MultipleMinima { first: first.c, second: other.c });
                }
            }
            Ok(good.into_iter().min_by(|a, b| a.residual.total_cmp(&b.residual)).expect("nonempty").clone())
        }
    }
}

fn asymptotic_estimate(samples: &[(Complex64, f64)]) -> Option<Complex64> {
    let find = |z: Complex64| samples.iter().find(|(w, _)| (*w - z).norm() == 0.0).map(|p| p.1);
    let s = samples.iter().filter(|(z, _)| z.im == 0.0 && z.re > 0.0).map(|(z, _)| z.re).reduce(f64::min)?;
    let i = Complex64::new(0.0, 1.0);
    let (hp, hm) = (find(s.into())?, find((-s).into())?);
    let (hi, hmi) = (find(i * s)?, find(-i * s)?);
    Some(Complex64::new((hp * hp - hm * hm) / (4.0 * s), (hi * hi - hmi * hmi) / (4.0 * s)))
}
