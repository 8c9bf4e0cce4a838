use num_complex::Complex64;

use super::C0;

/// Solution of a dense least-squares problem.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub coeffs: Vec<Complex64>,
    /// `|A x - b|_2` recomputed from the returned coefficients.
    pub residual: f64,
    /// Numerical rank used by the truncated solve.
    pub rank: usize,
}

/// Minimizes `|sum_k x_k cols[k] - rhs|` by Householder QR with column
/// pivoting. Columns whose pivot falls below `rcond * |R_00|` are dropped
/// (their coefficients are zero).
pub fn least_squares(cols: &[Vec<Complex64>], rhs: &[Complex64], rcond: f64) -> LeastSquares {
    let k = cols.len();
    let m = rhs.len();
    assert!(cols.iter().all(|c| c.len() == m), "column length mismatch");
    let mut a: Vec<Vec<Complex64>> = cols.to_vec();
    let mut b = rhs.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();
    let steps = k.min(m);
    let mut diag = vec![0.0f64; steps];

    for j in 0..steps {
        // pivot: largest remaining column norm over rows j..m
        let (piv, _) = (j..k)
            .map(|c| (c, a[c][j..].iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        a.swap(j, piv);
        perm.swap(j, piv);

        let x = &a[j][j..];
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            diag[j] = 0.0;
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex64> = x.to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            for col in a.iter_mut().skip(j) {
                reflect(&v, vnorm2, &mut col[j..]);
            }
            reflect(&v, vnorm2, &mut b[j..]);
        }
        diag[j] = a[j][j].norm();
    }

    let lead = diag.first().copied().unwrap_or(0.0);
    let rank = diag.iter().take_while(|&&d| d > rcond * lead && d > 0.0).count();
    let mut y = vec![C0; k];
    for i in (0..rank).rev() {
        let mut s = b[i];
        for c in i + 1..rank {
            s -= a[c][i] * y[c];
        }
        y[i] = s / a[i][i];
    }
    let mut coeffs = vec![C0; k];
    for (slot, &p) in perm.iter().enumerate() {
        coeffs[p] = y[slot];
    }
    let mut r = rhs.to_vec();
    for (c, &x) in cols.iter().zip(&coeffs) {
        if x != C0 {
            for (ri, ci) in r.iter_mut().zip(c) {
                *ri -= ci * x;
            }
        }
    }
    let residual = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    LeastSquares { coeffs, residual, rank }
}

// y <- (I - 2 v v* / v*v) y
fn reflect(v: &[Complex64], vnorm2: f64, y: &mut [Complex64]) {
    let dot: Complex64 = v.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum();
    let f = dot * (2.0 / vnorm2);
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= vi * f;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_system() {
        let cols = vec![vec![c(1., 0.), c(0., 1.), c(1., 1.)], vec![c(2., 0.), c(1., 0.), c(0., -1.)]];
        let x = [c(0.5, -1.0), c(2.0, 0.25)];
        let rhs: Vec<Complex64> = (0..3).map(|i| cols[0][i] * x[0] + cols[1][i] * x[1]).collect();
        let ls = least_squares(&cols, &rhs, 1e-13);
        assert_eq!(ls.rank, 2);
        assert!(ls.residual < 1e-14);
        assert!((ls.coeffs[0] - x[0]).norm() < 1e-14 && (ls.coeffs[1] - x[1]).norm() < 1e-14);
    }

    #[test]
    fn rank_deficient_columns_dropped() {
        let cols = vec![vec![c(1., 0.), c(1., 0.)], vec![c(2., 0.), c(2., 0.)], vec![c(0., 0.), c(0., 0.)]];
        let ls = least_squares(&cols, &[c(3., 0.), c(3., 0.)], 1e-12);
        assert_eq!(ls.rank, 1);
        assert!(ls.residual < 1e-14);
    }

    #[test]
    fn inconsistent_reports_residual() {
        let cols = vec![vec![c(1., 0.), c(0., 0.)]];
        let ls = least_squares(&cols, &[c(1., 0.), c(1., 0.)], 1e-12);
        assert!((ls.residual - 1.0).abs() < 1e-14);
    }
}
