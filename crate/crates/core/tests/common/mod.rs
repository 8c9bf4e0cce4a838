//! Helpers shared by the property and acceptance suites: seeded inputs and
//! brute-force oracles that do not reuse the code under test.
#![allow(dead_code)]

use num_complex::Complex64;
use unicell::linalg::{spectral_norm, CMatrix};
use unicell::random::{complex_in_disc, rng, unicellular_triangular};

/// Hidden matrix of the reconstructible class.
pub fn hidden(seed: u64, n: usize, lambda_radius: f64, sup: (f64, f64), upper: f64) -> CMatrix {
    let mut r = rng(seed);
    let lambda = complex_in_disc(&mut r, lambda_radius);
    unicellular_triangular(&mut r, n, lambda, sup, upper)
}

/// Largest distance between two multisets after greedy nearest matching.
pub fn greedy_match(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut left: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("same length");
        worst = worst.max(d);
        left.swap_remove(k);
    }
    worst
}

fn misfit(m: &CMatrix, samples: &[(Complex64, f64)], c: Complex64) -> f64 {
    let n = m.n();
    samples
        .iter()
        .map(|&(z, h)| {
            let mut t = m.clone();
            t[(0, n - 1)] = c + z;
            let r = spectral_norm(&t).expect("finite") - h;
            r * r
        })
        .sum()
}

/// Exhaustive corner search: minimizes the squared sample misfit over a
/// `grid x grid` lattice on the square `|Re c|, |Im c| <= radius`, then
/// polishes the best lattice point by compass search.
pub fn brute_force_corner(m: &CMatrix, samples: &[(Complex64, f64)], radius: f64, grid: usize) -> Complex64 {
    let step = 2.0 * radius / (grid - 1) as f64;
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for i in 0..grid {
        for j in 0..grid {
            let c = Complex64::new(-radius + i as f64 * step, -radius + j as f64 * step);
            let f = misfit(m, samples, c);
            if f < best.0 {
                best = (f, c);
            }
        }
    }
    let (mut f, mut c) = best;
    let mut h = step;
    let dirs = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
    while h > 1e-13 * (1.0 + c.norm()) {
        let mut moved = false;
        for d in dirs {
            let trial = c + d * h;
            let ft = misfit(m, samples, trial);
            if ft < f {
                (f, c) = (ft, trial);
                moved = true;
                break;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    c
}
