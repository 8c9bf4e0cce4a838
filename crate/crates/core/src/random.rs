//! Seeded samplers shared by the invariant tests and the test suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, C0};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform on the closed unit disc of radius `r`.
pub fn complex_in_disc(rng: &mut impl Rng, r: f64) -> Complex64 {
    let rad = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(rad, rng.random::<f64>() * std::f64::consts::TAU)
}

pub fn unit_phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

pub fn gaussian_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: Gram-Schmidt on a Gaussian matrix with the
/// diagonal phases of `R` folded back in.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let d: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= qi * d);
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
        cols.push(v);
    }
    CMatrix::from_fn(n, |i, j| cols[j][i])
}

pub fn diagonal_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::diag(&(0..n).map(|_| unit_phase(rng)).collect::<Vec<_>>())
}

/// Upper triangular matrix with constant diagonal `lambda`, superdiagonal
/// moduli uniform in `sup_range` with random phases, and the remaining upper
/// entries uniform in the disc of radius `upper_radius`.
pub fn unicellular_triangular(
    rng: &mut impl Rng,
    n: usize,
    lambda: Complex64,
    sup_range: (f64, f64),
    upper_radius: f64,
) -> CMatrix {
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = lambda;
        for j in i + 1..n {
            a[(i, j)] = if j == i + 1 {
                let m = sup_range.0 + (sup_range.1 - sup_range.0) * rng.random::<f64>();
                unit_phase(rng) * m
            } else if upper_radius > 0.0 {
                complex_in_disc(rng, upper_radius)
            } else {
                C0
            };
        }
    }
    a
}
